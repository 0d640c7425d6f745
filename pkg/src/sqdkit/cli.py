"""Command-line front end emitting machine-readable benchmark records.

Subcommands: ``fci``, ``vqe``, ``qsci``, ``sqd``, ``sample``, ``coupon``.
Every emitted record carries the seed, the package version and a hash of
the effective configuration, so a record is enough to reproduce itself
bit-exactly.  Exit codes: 0 success, 2 input error, 3 non-convergence.
"""
from __future__ import annotations

import hashlib
import json
import sys

import click
import numpy as np

from . import __version__, coupon
from .fcidump import FcidumpError, read_fcidump
from .paulis import build_qubit_hamiltonian, general_commuting_groups, qubitwise_commuting_groups
from .qsci import qsci_energy, qsci_subspace, raw_qsci_subspace
from .sampling import NoiseModel, sample_bitstrings, spin_pools, symmetry_filter
from .sqd import SqdConfig, sqd_run
from .statevector import (
    estimate_energy_by_sampling,
    expectation,
    fci_ground_state,
    prepare_basis_state,
    uccsd_excitations,
    vqe_optimize,
)

EXIT_INPUT = 2
EXIT_NOCONV = 3


def _config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _metadata(config: dict) -> dict:
    return {"seed": config.get("seed", 0), "version": __version__,
            "config_hash": _config_hash(config)}


def _load(fcidump_path):
    try:
        return read_fcidump(fcidump_path)
    except (OSError, FcidumpError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)


def _noise(p01, p10):
    if p01 == 0.0 and p10 == 0.0:
        return None
    try:
        return NoiseModel(p01=p01, p10=p10)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)


def _hf_index(ints):
    return (((1 << ints.n_alpha) - 1)
            | (((1 << ints.n_beta) - 1) << ints.n_orbitals))


def _trial_state(ints, kind, sweeps, tol):
    fci = fci_ground_state(ints)
    if kind == "exact":
        return fci.state, fci
    from .statevector import apply_ansatz

    ham = build_qubit_hamiltonian(ints)
    reference = prepare_basis_state(_hf_index(ints), 2 * ints.n_orbitals)
    ansatz = uccsd_excitations(ints.n_orbitals, ints.n_alpha, ints.n_beta)
    res = vqe_optimize(ham, ansatz, reference, sweeps=sweeps, tol=tol)
    return apply_ansatz(reference, ansatz, res.parameters), fci


def _emit(payload: dict, out, fmt: str, csv_rows=None):
    if fmt == "csv" and csv_rows is not None:
        header = list(csv_rows[0].keys())
        lines = [",".join(header)]
        lines += [",".join(str(r[k]) for k in header) for r in csv_rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(payload, indent=2, default=float) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _shots_list(spec: str):
    try:
        shots = [int(x) for x in spec.split(",") if x]
    except ValueError:
        click.echo(f"error: bad shot list {spec!r}", err=True)
        sys.exit(EXIT_INPUT)
    if not shots or any(s < 1 for s in shots):
        click.echo(f"error: bad shot list {spec!r}", err=True)
        sys.exit(EXIT_INPUT)
    return shots


@click.group()
def main():
    """Sampling-based quantum diagonalization toolkit."""


fcidump_opt = click.option("--fcidump", required=True, type=click.Path(),
                           help="Path to the FCIDUMP file.")
seed_opt = click.option("--seed", default=0, show_default=True, type=int)
out_opt = click.option("--out", default=None, type=click.Path(),
                       help="Write the report here instead of stdout.")
fmt_opt = click.option("--format", "fmt", default="json", show_default=True,
                       type=click.Choice(["json", "csv"]))
noise_opts = [
    click.option("--noise-p01", default=0.0, show_default=True, type=float,
                 help="Readout flip probability 0->1."),
    click.option("--noise-p10", default=0.0, show_default=True, type=float,
                 help="Readout flip probability 1->0."),
]
trial_opt = click.option("--trial", default="exact", show_default=True,
                         type=click.Choice(["exact", "vqe"]),
                         help="Trial state sampled by the estimators.")


def _add(opts):
    def deco(f):
        for opt in reversed(opts):
            f = opt(f)
        return f
    return deco


@main.command()
@fcidump_opt
@seed_opt
@out_opt
def fci(fcidump, seed, out):
    """Exact diagonalization benchmark: FCI and Hartree-Fock anchors."""
    ints = _load(fcidump)
    config = {"command": "fci", "fcidump": fcidump, "seed": seed}
    res = fci_ground_state(ints)
    from .determinants import Determinant, slater_condon_element

    hf_det = Determinant.hartree_fock(ints.n_alpha, ints.n_beta)
    hf_energy = slater_condon_element(hf_det, hf_det, ints) + ints.core_energy
    hf_weight = float(res.coefficients[res.subspace.index(hf_det)] ** 2)
    payload = {
        "command": "fci",
        "fci_energy": res.energy,
        "hf_energy": hf_energy,
        "space_dimension": len(res.subspace),
        "hf_weight": hf_weight,
        **_metadata(config),
    }
    click.echo(f"FCI energy: {res.energy:.5f} Ha  (dimension {len(res.subspace)})",
               err=True)
    _emit(payload, out, "json")


@main.command()
@fcidump_opt
@seed_opt
@out_opt
@click.option("--exact/--sampled", "exact_mode", default=True,
              help="Exact statevector expectation vs grouped shot estimate.")
@click.option("--shots-per-group", default=1000, show_default=True, type=int)
@click.option("--sweeps", default=3, show_default=True, type=int)
@click.option("--tol", default=2e-4, show_default=True, type=float,
              help="Sweep-improvement stopping tolerance, Hartree.")
@click.option("--grouping", default="qubitwise", show_default=True,
              type=click.Choice(["qubitwise", "general"]),
              help="Grouping used for the reported census (measurement "
                   "always uses the qubit-wise partition).")
@_add(noise_opts)
def vqe(fcidump, seed, out, exact_mode, shots_per_group, sweeps, tol,
        grouping, noise_p01, noise_p10):
    """UCCSD-VQE trial-state energy, exact or from grouped sampling."""
    ints = _load(fcidump)
    config = {"command": "vqe", "fcidump": fcidump, "seed": seed,
              "exact": exact_mode, "shots_per_group": shots_per_group,
              "sweeps": sweeps, "tol": tol, "noise_p01": noise_p01,
              "noise_p10": noise_p10}
    ham = build_qubit_hamiltonian(ints)
    reference = prepare_basis_state(_hf_index(ints), 2 * ints.n_orbitals)
    ansatz = uccsd_excitations(ints.n_orbitals, ints.n_alpha, ints.n_beta)
    result = vqe_optimize(ham, ansatz, reference, sweeps=sweeps, tol=tol)
    from .statevector import apply_ansatz

    state = apply_ansatz(reference, ansatz, result.parameters)
    fci_energy = fci_ground_state(ints).energy
    groups = qubitwise_commuting_groups(ham)
    n_general = len(general_commuting_groups(ham))
    payload = {
        "command": "vqe",
        "method": "vqe",
        "n_terms": len(ham),
        "n_groups_qubitwise": len(groups),
        "n_groups_general": n_general,
        "sweep_trace": result.trace,
        "fci_energy": fci_energy,
        **_metadata(config),
    }
    if exact_mode:
        payload["energy"] = expectation(state, ham)
        payload["stderr"] = 0.0
        payload["shots"] = 0
    else:
        energy, stderr = estimate_energy_by_sampling(
            state, ham, groups, shots_per_group,
            noise=_noise(noise_p01, noise_p10), seed=seed)
        payload["energy"] = energy
        payload["stderr"] = stderr
        payload["shots"] = shots_per_group * len(groups)
    payload["abs_error"] = abs(payload["energy"] - fci_energy)
    click.echo(f"VQE energy: {payload['energy']:.5f} Ha", err=True)
    _emit(payload, out, "json")


def _estimate_records(method, ints, state, fci_energy, shots_list, noise,
                      seed, sqd_config=None, raw_r=None):
    records = []
    for budget in shots_list:
        dist = sample_bitstrings(state, budget, noise=noise, seed=seed)
        valid, _ = symmetry_filter(dist, ints.n_orbitals, ints.n_alpha,
                                   ints.n_beta)
        record = {
            "method": method,
            "shots": budget,
            "n_discovered": dist.n_unique(),
            "n_valid": valid.n_unique(),
            "seed": seed,
        }
        if method == "qsci":
            if raw_r is not None:
                sub = raw_qsci_subspace(dist, raw_r, ints.n_orbitals,
                                        ints.n_alpha, ints.n_beta)
                res = qsci_energy(sub, ints)
            else:
                ua, ub = spin_pools(dist, ints.n_orbitals, ints.n_alpha,
                                    ints.n_beta)
                res = qsci_energy(qsci_subspace(ua, ub), ints,
                                  pool_sizes=(len(ua), len(ub)))
            record["energy"] = res.energy
            record["subspace_size"] = res.subspace_size
        else:
            res = sqd_run(dist, ints, sqd_config)
            record["energy"] = res.energy
            record["subspace_size"] = res.subspace_size
            record["n_iterations"] = len(res.iterations)
        record["abs_error"] = abs(record["energy"] - fci_energy)
        records.append(record)
    return records


@main.command()
@fcidump_opt
@click.option("--shots", required=True,
              help="Comma-separated shot budgets, e.g. 100,1000,10000.")
@seed_opt
@out_opt
@fmt_opt
@trial_opt
@click.option("--raw-r", default=None, type=int,
              help="Raw QSCI: keep the R most frequent valid bitstrings.")
@click.option("--sweeps", default=3, show_default=True, type=int)
@_add(noise_opts)
def qsci(fcidump, shots, seed, out, fmt, trial, raw_r, sweeps, noise_p01,
         noise_p10):
    """QSCI energies across shot budgets."""
    ints = _load(fcidump)
    config = {"command": "qsci", "fcidump": fcidump, "shots": shots,
              "seed": seed, "trial": trial, "raw_r": raw_r,
              "noise_p01": noise_p01, "noise_p10": noise_p10}
    state, fci = _trial_state(ints, trial, sweeps, 2e-4)
    try:
        records = _estimate_records(
            "qsci", ints, state, fci.energy, _shots_list(shots),
            _noise(noise_p01, noise_p10), seed, raw_r=raw_r)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NOCONV)
    for r in records:
        click.echo(f"qsci {r['shots']:>9} shots  E = {r['energy']:.5f} Ha  "
                   f"subspace {r['subspace_size']}", err=True)
    _emit({"command": "qsci", "records": records, **_metadata(config)},
          out, fmt, csv_rows=records)


@main.command()
@fcidump_opt
@click.option("--shots", required=True,
              help="Comma-separated shot budgets, e.g. 100,1000,10000.")
@seed_opt
@out_opt
@fmt_opt
@trial_opt
@click.option("--batches", default=3, show_default=True, type=int)
@click.option("--batch-size", default=300, show_default=True, type=int)
@click.option("--tolerance", default=1e-6, show_default=True, type=float)
@click.option("--max-iter", default=5, show_default=True, type=int)
@click.option("--sweeps", default=3, show_default=True, type=int)
@_add(noise_opts)
def sqd(fcidump, shots, seed, out, fmt, trial, batches, batch_size,
        tolerance, max_iter, sweeps, noise_p01, noise_p10):
    """SQD energies across shot budgets."""
    ints = _load(fcidump)
    config = {"command": "sqd", "fcidump": fcidump, "shots": shots,
              "seed": seed, "trial": trial, "batches": batches,
              "batch_size": batch_size, "tolerance": tolerance,
              "max_iter": max_iter, "noise_p01": noise_p01,
              "noise_p10": noise_p10}
    try:
        cfg = SqdConfig(n_batches=batches, batch_size=batch_size,
                        max_iterations=max_iter, tolerance=tolerance,
                        seed=seed)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    state, fci = _trial_state(ints, trial, sweeps, 2e-4)
    try:
        records = _estimate_records(
            "sqd", ints, state, fci.energy, _shots_list(shots),
            _noise(noise_p01, noise_p10), seed, sqd_config=cfg)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NOCONV)
    for r in records:
        click.echo(f"sqd  {r['shots']:>9} shots  E = {r['energy']:.5f} Ha  "
                   f"subspace {r['subspace_size']}", err=True)
    _emit({"command": "sqd", "records": records, **_metadata(config)},
          out, fmt, csv_rows=records)


@main.command()
@fcidump_opt
@click.option("--shots", required=True, type=int)
@seed_opt
@out_opt
@trial_opt
@click.option("--sweeps", default=3, show_default=True, type=int)
@_add(noise_opts)
def sample(fcidump, shots, seed, out, trial, sweeps, noise_p01, noise_p10):
    """Sample the trial state and dump the empirical distribution."""
    ints = _load(fcidump)
    config = {"command": "sample", "fcidump": fcidump, "shots": shots,
              "seed": seed, "trial": trial, "noise_p01": noise_p01,
              "noise_p10": noise_p10}
    if shots < 1:
        click.echo("error: shots must be >= 1", err=True)
        sys.exit(EXIT_INPUT)
    state, _ = _trial_state(ints, trial, sweeps, 2e-4)
    dist = sample_bitstrings(state, shots, noise=_noise(noise_p01, noise_p10),
                             seed=seed)
    payload = {"command": "sample", "distribution": dist.to_json_dict(),
               **_metadata(config)}
    _emit(payload, out, "json")


@main.command()
@click.option("--m-grid", default=None,
              help="Support sizes, e.g. 10:51:5 (start:stop:step) or 10,20,50.")
@click.option("--p-max", default=0.972, show_default=True, type=float)
@click.option("--fcidump", default=None, type=click.Path(),
              help="Derive the support distribution from this system instead.")
@trial_opt
@click.option("--mc-trials", default=0, show_default=True, type=int,
              help="Add a Monte-Carlo cross-check column (0 disables).")
@click.option("--mc-max-m", default=30, show_default=True, type=int)
@click.option("--exact-max-m", default=20, show_default=True, type=int)
@seed_opt
@out_opt
@fmt_opt
def coupon_cmd(m_grid, p_max, fcidump, trial, mc_trials, mc_max_m,
               exact_max_m, seed, out, fmt):
    """Coupon-collector discovery costs over a support-size grid."""
    config = {"command": "coupon", "m_grid": m_grid, "p_max": p_max,
              "fcidump": fcidump, "seed": seed, "mc_trials": mc_trials}
    rows = []
    if fcidump is not None:
        ints = _load(fcidump)
        state, _ = _trial_state(ints, trial, 3, 2e-4)
        dist = coupon.AmplitudeDistribution.from_state(state)
        m = len(dist)
        row = {"m": m, "p_max": float(np.max(dist.p)),
               "lower_bound": coupon.expected_shots_lower_bound(dist),
               "integral": coupon.expected_shots_integral(dist),
               "uniform": coupon.expected_shots_uniform(m)}
        if mc_trials and m <= mc_max_m:
            stats = coupon.simulate_discovery(dist, mc_trials, seed=seed)
            row.update(mc_mean=stats.mean, mc_stderr=stats.stderr)
        rows.append(row)
    else:
        if m_grid is None:
            click.echo("error: need --m-grid or --fcidump", err=True)
            sys.exit(EXIT_INPUT)
        try:
            if ":" in m_grid:
                start, stop, step = (int(x) for x in m_grid.split(":"))
                ms = list(range(start, stop, step))
            else:
                ms = [int(x) for x in m_grid.split(",") if x]
        except ValueError:
            click.echo(f"error: bad m grid {m_grid!r}", err=True)
            sys.exit(EXIT_INPUT)
        for m in ms:
            dist = coupon.AmplitudeDistribution.skewed(p_max, m)
            row = {"m": m, "p_max": p_max,
                   "lower_bound": coupon.skew_lower_bound(p_max, m),
                   "integral": (coupon.expected_shots_integral(dist)
                                if m <= 400 else float("nan")),
                   "uniform": coupon.expected_shots_uniform(m)}
            if m <= exact_max_m:
                row["exact"] = coupon.expected_shots_exact(dist)
            if mc_trials and m <= mc_max_m:
                stats = coupon.simulate_discovery(dist, mc_trials, seed=seed)
                row.update(mc_mean=stats.mean, mc_stderr=stats.stderr)
            rows.append(row)
    payload = {"command": "coupon", "rows": rows, **_metadata(config)}
    _emit(payload, out, fmt, csv_rows=rows)


main.add_command(coupon_cmd, name="coupon")


if __name__ == "__main__":
    main()
