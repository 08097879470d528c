"""Command-line client for the solver service.

Subcommands mirror the HTTP endpoints and call the same handler functions
in-process, so no server is needed for batch use.  Output is deterministic:
CSV with a header row, or JSON keyed with a top-level "schema": 1, both with
every float serialized to 12 significant digits.

Exit codes: 0 success, 2 usage/configuration error, 3 numerical validation
failure (completeness audit, oracle mismatch, or reference-table deviation).
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .oracle import OracleMismatchError
from .spectrum import SpectrumAuditError
from .service import handlers as service
from .service.schemas import (
    OracleParams,
    SpecialParams,
    SpectrumParams,
    TableParams,
    WavefunctionParams,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def fmt(value) -> str:
    """Serialize one CSV cell; floats carry 12 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _json_ready(value):
    if isinstance(value, float):
        return float(format(value, ".12g"))
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    return value


def render_csv(columns: list[str], rows: list[dict], meta: dict | None = None) -> str:
    lines = []
    if meta:
        pairs = " ".join(f"{k}={fmt(v)}" for k, v in meta.items())
        lines.append(f"# {pairs}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def render_json(command: str, params: dict, columns: list[str], rows: list[dict],
                meta: dict | None = None) -> str:
    payload = {
        "schema": 1,
        "command": command,
        "params": _json_ready(params),
        "rows": [_json_ready({c: row.get(c) for c in columns}) for row in rows],
    }
    if meta:
        payload["meta"] = _json_ready(meta)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit(args, command: str, params: dict, columns: list[str], rows: list[dict],
         meta: dict | None = None) -> None:
    if args.format == "json":
        text = render_json(command, params, columns, rows, meta)
    else:
        text = render_csv(columns, rows, meta)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spectrum_params(args) -> SpectrumParams:
    return SpectrumParams(a=args.a, b=args.b, v0=args.v0,
                          n_states=args.n_states, e_max=args.e_max)


def cmd_spectrum(args) -> int:
    resp = service.spectrum_response(_spectrum_params(args))
    columns = ["index", "energy", "kind", "nodes", "uncertainty"]
    rows = [r.model_dump() for r in resp.rows]
    meta = {"max_offdiag_overlap": resp.max_offdiag_overlap,
            "max_c1_residual": resp.max_c1_residual}
    emit(args, "spectrum", resp.params.model_dump(), columns, rows, meta)
    return EXIT_OK


def cmd_special(args) -> int:
    params = SpecialParams(a=args.a, b=args.b, v0=args.v0,
                           condition=args.condition, count=args.count)
    resp = service.special_response(params)
    columns = ["condition", "index", "v0", "f_residual", "g_residual",
               "paired_index", "paired_v0"]
    rows = [r.model_dump() for r in resp.rows]
    emit(args, "special", resp.params.model_dump(), columns, rows)
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    params = WavefunctionParams(a=args.a, b=args.b, v0=args.v0,
                                n_states=args.n_states, e_max=args.e_max,
                                state_index=args.state_index, samples=args.samples)
    resp = service.wavefunction_response(params)
    columns = ["x", "psi"]
    rows = [r.model_dump() for r in resp.rows]
    emit(args, "wavefunction", resp.params.model_dump(), columns, rows,
         meta=resp.meta.model_dump())
    return EXIT_OK


def cmd_oracle(args) -> int:
    params = OracleParams(a=args.a, b=args.b, v0=args.v0,
                          n_states=args.n_states, e_max=args.e_max,
                          grid_n=args.grid_n)
    resp = service.oracle_response(params)
    columns = ["grid_n", "index", "eigenvalue", "deviation", "ratio"]
    rows = [r.model_dump() for r in resp.rows]
    meta = {"matched": resp.matched,
            "unmatched_analytic": len(resp.unmatched_analytic),
            "unmatched_oracle": len(resp.unmatched_oracle)}
    emit(args, "oracle", resp.params.model_dump(), columns, rows, meta)
    if not resp.matched:
        print("oracle mismatch: "
              f"analytic-without-oracle={resp.unmatched_analytic}, "
              f"oracle-without-analytic={resp.unmatched_oracle}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_table1(args) -> int:
    params = TableParams(a=args.a, b=args.b)
    resp = service.table_response(params)
    columns = ["row_id", "level", "v0_nominal", "v0_used", "reference",
               "computed", "deviation", "kind", "ok"]
    rows = [r.model_dump() for r in resp.rows]
    meta = {"max_abs_deviation": resp.max_abs_deviation, "all_ok": resp.all_ok,
            "extra_states": "; ".join(resp.extra_states)}
    emit(args, "table1", resp.params.model_dump(), columns, rows, meta)
    if not resp.all_ok:
        bad = [f"row {r.row_id} {r.level}" for r in resp.rows if not r.ok]
        print(f"reference-table mismatches: {', '.join(bad)}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("wellbarrier.service:app", host=args.host, port=args.port)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, with_states: bool = True) -> None:
    parser.add_argument("--a", type=float, default=6.0, help="wall position (walls at +/-a)")
    parser.add_argument("--b", type=float, default=2.0, help="half-width of the block")
    parser.add_argument("--v0", type=float, default=0.0, help="well depth / barrier height")
    if with_states:
        parser.add_argument("--n-states", type=int, default=None, dest="n_states",
                            help="number of levels (default 6)")
        parser.add_argument("--e-max", type=float, default=None, dest="e_max",
                            help="energy cutoff instead of a level count")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", type=str, default=None, help="write to file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wellbarrier",
        description="Bound states of an anti-symmetric square well/barrier "
                    "between rigid walls (units 2m = hbar = 1).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="indexed spectrum with kinds and diagnostics")
    _add_common(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("special", help="special v0 catalogs (zero-energy / barrier-top)")
    p.add_argument("condition", choices=("f", "g", "both"),
                   help="f: zero-energy roots, g: barrier-top roots, both: paired")
    p.add_argument("--count", type=int, default=4)
    _add_common(p, with_states=False)
    p.set_defaults(fn=cmd_special)

    p = sub.add_parser("wavefunction", help="sampled eigenfunction of one state")
    p.add_argument("state_index", type=int, help="state index (0 = ground state)")
    p.add_argument("--samples", type=int, default=1200)
    _add_common(p)
    p.set_defaults(fn=cmd_wavefunction)

    p = sub.add_parser("oracle", help="finite-difference cross-validation")
    p.add_argument("--grid-n", type=int, default=8000, dest="grid_n",
                   help="finest grid; runs at n/4, n/2, n")
    _add_common(p)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("table1", help="reproduce the reference table of first six levels")
    _add_common(p, with_states=False)
    p.set_defaults(fn=cmd_table1)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", type=str, default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpectrumAuditError, OracleMismatchError) as exc:
        print(f"numerical validation failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
