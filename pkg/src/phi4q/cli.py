"""Command-line front end writing plot-ready CSV or JSON.

Value lists accept ``start:stop:step`` ranges (stop inclusive) or
comma-separated values, e.g. ``--phi-max 1.0:6.0:0.1`` or ``--nq 3,4,5``.
The default worker count for sweeps comes from ``PHI4Q_WORKERS``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from typing import Callable, Sequence

import numpy as np

from . import __version__
from . import operators as ops
from .circuits import symmetric_qft_circuit, synth_pauli_exp, trotter_step_jlp
from .grid import BoundaryMode, HoBasisSpec, build_jlp_grid, grid_from_states
from .hamiltonians import (LatticeSpec, Pi2Variant, SiteTheoryParams, SpatialBC, build_lattice_hamiltonian,
                           build_site_hamiltonian_ho, build_site_hamiltonian_jlp, delta_h_omega,
                           kinetic_operator)
from .pauli import PauliString, decompose, resource_table
from .spectra import (default_workers, eigensolve, epsilon_percent, noise_ensemble,
                      reference_energy, sweep_ho, sweep_jlp, wavefunctions)


class CliError(Exception):
    pass


def parse_values(text: str, kind: Callable = float) -> list:
    """``a:b:s`` (inclusive) or ``a,b,c`` into a list of ``kind``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        vals = [round(start + i * step, 12) for i in range(count)]
    else:
        vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise argparse.ArgumentTypeError(f"no values in {text!r}")
    if kind is int:
        if any(v != int(v) for v in vals):
            raise argparse.ArgumentTypeError(f"expected integers in {text!r}")
        return [int(v) for v in vals]
    return [kind(v) for v in vals]


def _ints(text: str) -> list[int]:
    return parse_values(text, int)


def _floats(text: str) -> list[float]:
    return parse_values(text, float)


def _params(args) -> SiteTheoryParams:
    if getattr(args, "mu", None) is not None:
        return SiteTheoryParams.double_well(args.mu, args.lam)
    return SiteTheoryParams(args.mass_sq, args.lam)


def _state_counts(args) -> list[int]:
    if args.states is not None:
        return args.states
    if args.nq is not None:
        return [1 << n for n in args.nq]
    raise CliError("one of --nq or --states is required")


def _nq(args) -> int:
    if not args.nq:
        raise CliError("--nq is required")
    return args.nq[0]


# commands return (records, default text output or None)

def cmd_spectrum(args):
    params = _params(args)
    states = _state_counts(args)[0]
    if args.basis == "jlp":
        site = grid_from_states(states, args.phi_max[0], args.bc)
    else:
        site = HoBasisSpec(args.omega[0], states, args.headroom)
    if args.sites > 1:
        h = build_lattice_hamiltonian(LatticeSpec(args.sites, site, args.spatial_bc), params, args.variant)
    elif args.basis == "jlp":
        h = build_site_hamiltonian_jlp(site, params, args.variant)
    else:
        h = build_site_hamiltonian_ho(site, params)
    res = eigensolve(h, min(args.levels, h.dim), vectors=False)
    out = []
    for lvl, e in enumerate(res.eigenvalues):
        row = {"level": lvl, "energy": float(e)}
        try:
            ref = reference_energy(params, lvl, args.sites) if lvl < 2 else None
        except KeyError:
            ref = None
        row["reference"] = ref
        row["epsilon_percent"] = epsilon_percent(e, ref) if ref else None
        out.append(row)
    return out, None


def cmd_sweep(args):
    states = _state_counts(args)
    if args.basis == "jlp":
        recs = sweep_jlp(args.lam, _params(args).mass_sq, args.variant, args.phi_max, states, args.level,
                         args.bc, workers=args.workers)
    else:
        recs = sweep_ho(args.lam, _params(args).mass_sq, args.omega, states, args.level,
                        axis_scale=args.axis_scale, headroom=args.headroom, workers=args.workers)
    return [r.as_row() for r in recs], None


_K2 = {
    Pi2Variant.FINITE_DIFFERENCE: ops.k2_finite_difference,
    Pi2Variant.IMPROVED1: lambda g: ops.k2_improved(g, 1),
    Pi2Variant.IMPROVED2: lambda g: ops.k2_improved(g, 2),
    Pi2Variant.EXACT: ops.k2_exact,
}

_SYSTEMS = {"free-ho": lambda a: SiteTheoryParams(1.0, 0.0), "phi4": _params}


def cmd_decompose(args):
    n = _nq(args)
    params = _SYSTEMS[args.system](args)
    phi_max = args.phi_max[0]
    grid = build_jlp_grid(n, phi_max, args.bc)
    spec = HoBasisSpec(args.omega[0], 1 << n, args.headroom)
    target = args.target
    if target == "phi2":
        op = ops.field_power_op(grid, 2)
    elif target == "phi4":
        op = ops.field_power_op(grid, 4)
    elif target.startswith("pi2-") and target.endswith("-field"):
        op = kinetic_operator(grid, target[4:-6])
    elif target.startswith("pi2-"):
        # momentum-space diagonal, the form exponentiated between QFTs
        op = np.diag(_K2[Pi2Variant.parse(target[4:])](grid))
    elif target == "hamiltonian":
        op = build_site_hamiltonian_jlp(grid, params, args.variant)
    elif target == "ho-phi":
        op = ops.ho_phi_power_op(spec, 1)
    elif target == "ho-basis":
        op = ops.ho_basis_hamiltonian(spec)
    elif target == "ho-delta":
        op = delta_h_omega(spec, params.mass_sq)
    elif target == "ho-hamiltonian":
        op = build_site_hamiltonian_ho(spec, params)
    else:
        raise CliError(f"unknown target {target!r}")
    ps = decompose(op)
    recs = [{"axes": t.axes, "coefficient": t.coefficient, "weight": t.weight} for t in ps]
    return recs, ps.to_text()


def cmd_circuit(args):
    if args.kind == "qft":
        c = symmetric_qft_circuit(_nq(args), decomposed=args.decomposed, swaps=args.swaps)
    elif args.kind == "trotter":
        grid = build_jlp_grid(_nq(args), args.phi_max[0], BoundaryMode.TWISTED)
        c = trotter_step_jlp(grid, _params(args), args.dt, decomposed_qft=args.decomposed,
                             swap_network=args.swaps)
    else:
        if not args.string:
            raise CliError("--string is required for pauli-exp")
        c = synth_pauli_exp(PauliString(args.string, 1.0), args.theta)
    recs = [{"index": i, "kind": g.kind, "qubits": " ".join(map(str, g.qubits)), "angle": g.angle}
            for i, g in enumerate(c.gates)]
    return recs, c.to_text()


def cmd_tally(args):
    rows = resource_table(args.table, args.nq or range(2, 7))
    max_k = max(max(t.k_body_counts, default=0) for _, _, t in rows)
    return [{"basis": b, "n_q": n, **t.as_row(max_k)} for b, n, t in rows], None


def cmd_noise(args):
    seeds = list(range(args.seeds)) if args.seed_list is None else args.seed_list
    states = _state_counts(args)
    ens = noise_ensemble(args.sigma, seeds, args.lam, _params(args).mass_sq, args.phi_max[0], states,
                         args.variant, args.level, args.workers)
    out = []
    for ns in states:
        e = ens[ns]
        out.append({"n_states": ns, "sigma": args.sigma, "n_seeds": len(seeds),
                    "median": float(np.median(e)), "min": float(e.min()), "max": float(e.max())})
    return out, None


def cmd_wavefunction(args):
    grid = grid_from_states(_state_counts(args)[0], args.phi_max[0], args.bc)
    h = build_site_hamiltonian_jlp(grid, _params(args), args.variant)
    res = eigensolve(h, args.level + 1)
    wf = wavefunctions(res, grid, args.level)
    out = []
    for space, coord, amp in (("field", wf.fields, wf.field_amplitudes),
                              ("momentum", wf.momenta, wf.momentum_amplitudes)):
        for i, (x, a) in enumerate(zip(coord, amp)):
            a = complex(a)
            out.append({"space": space, "index": i, "coordinate": float(x), "re": a.real, "im": a.imag,
                        "probability": abs(a) ** 2})
    return out, None


COMMANDS = {
    "spectrum": cmd_spectrum, "sweep": cmd_sweep, "decompose": cmd_decompose, "circuit": cmd_circuit,
    "tally": cmd_tally, "noise": cmd_noise, "wavefunction": cmd_wavefunction,
}


def _add_theory(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=0.0, help="quartic coupling")
    p.add_argument("--mass-sq", type=float, default=1.0, help="mass squared (negative for a double well)")
    p.add_argument("--mu", type=float, default=None, help="double-well mu (sets mass_sq = -mu^2)")


def _add_grid(p: argparse.ArgumentParser, phi_default: str = "3.0") -> None:
    p.add_argument("--nq", type=_ints, default=None, help="qubit counts (list or range)")
    p.add_argument("--states", type=_ints, default=None, help="state counts (list or range)")
    p.add_argument("--phi-max", type=_floats, default=_floats(phi_default), help="field cutoffs (list or range)")
    p.add_argument("--bc", choices=[b.value for b in BoundaryMode], default="twisted")
    p.add_argument("--variant", choices=[v.value for v in Pi2Variant], default="exact")


def _add_ho(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega", type=_floats, default=[1.0], help="HO basis frequencies (list or range)")
    p.add_argument("--headroom", type=int, default=4, help="extra HO states used before truncation")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="phi4q", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"phi4q {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("-o", "--output", default="-", help="output file (default stdout)")
        p.add_argument("--format", choices=["csv", "json", "text"], default=None)
        return p

    p = add("spectrum", "lowest eigenvalues of a single site or a small lattice")
    p.add_argument("--basis", choices=["jlp", "ho"], default="jlp")
    _add_theory(p); _add_grid(p); _add_ho(p)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--sites", type=int, default=1)
    p.add_argument("--spatial-bc", choices=[b.value for b in SpatialBC], default="periodic")

    p = add("sweep", "digitization error over a parameter grid")
    p.add_argument("--basis", choices=["jlp", "ho"], default="jlp")
    _add_theory(p); _add_grid(p); _add_ho(p)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--axis-scale", type=float, default=1.0, help="factor on the HO extent column")
    p.add_argument("--workers", type=int, default=None)

    p = add("decompose", "Pauli decomposition of an operator")
    p.add_argument("--system", choices=sorted(_SYSTEMS), default="free-ho")
    p.add_argument("--target", default="hamiltonian",
                   help="phi2, phi4, pi2-{fd,improved1,improved2,exact} (momentum-space diagonal; "
                        "append -field for the field-space matrix), hamiltonian, "
                        "ho-phi, ho-basis, ho-delta, ho-hamiltonian")
    _add_theory(p); _add_grid(p); _add_ho(p)

    p = add("circuit", "gate list for a QFT, Trotter step or Pauli exponential")
    p.add_argument("--kind", choices=["qft", "trotter", "pauli-exp"], default="trotter")
    _add_theory(p); _add_grid(p)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--string", default=None, help="Pauli axes for pauli-exp, e.g. XYZ")
    p.add_argument("--theta", type=float, default=0.1)
    p.add_argument("--decomposed", action="store_true", help="write controlled phases as CNOTs")
    p.add_argument("--swaps", action="store_true", help="use an explicit swap network")

    p = add("tally", "k-body operator and CNOT counts")
    p.add_argument("--table", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--nq", type=_ints, default=None)

    p = add("noise", "epsilon statistics under Gaussian momentum-space noise")
    _add_theory(p); _add_grid(p, "5.5")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--seeds", type=int, default=32, help="use seeds 0..N-1")
    p.add_argument("--seed-list", type=_ints, default=None)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)

    p = add("wavefunction", "field- and momentum-space amplitudes of an eigenstate")
    _add_theory(p); _add_grid(p)
    p.add_argument("--level", type=int, default=0)
    return ap


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "format")}
    if "workers" in cfg:
        cfg["workers"] = None  # results do not depend on the pool size
    return cfg


def render(args, records: list[dict], text: str | None) -> str:
    fmt = args.format or ("text" if text is not None else "csv")
    cfg = _config(args)
    if fmt == "json":
        doc = {"config": cfg, "records": records, "tool_version": __version__}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        if text is None:
            raise CliError(f"{args.command} has no text format; use csv or json")
        return text
    buf = io.StringIO()
    buf.write("# config " + json.dumps(cfg, sort_keys=True) + "\n")
    buf.write(f"# tool_version {__version__}\n")
    if records:
        w = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        w.writeheader()
        w.writerows({k: ("" if v is None else v) for k, v in r.items()} for r in records)
    return buf.getvalue()


def write_atomic(path: str, content: str) -> None:
    """Write to a temporary file beside ``path`` then rename over it."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".phi4q-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", None) is None and hasattr(args, "workers"):
        args.workers = default_workers()
    try:
        records, text = COMMANDS[args.command](args)
        out = render(args, records, text)
    except (CliError, ValueError, KeyError, np.linalg.LinAlgError) as exc:
        print(f"phi4q: error: {exc}", file=sys.stderr)
        return 2
    if args.output == "-":
        sys.stdout.write(out)
    else:
        write_atomic(args.output, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
