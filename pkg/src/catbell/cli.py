"""Command-line front end: a thin client of the catbell service.

Every subcommand builds a request model, sends it to the service (an
in-process ASGI instance by default, or a remote ``--server`` URL), and
formats the JSON response as CSV or JSON.  All computation lives behind
the service boundary, so CLI and HTTP clients always agree.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 equivalence
check mismatch.  Outputs are byte-identical across runs for identical
flags; files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import os
import sys
import tempfile

import httpx

from . import __version__

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_MISMATCH = 4

_CONVENTIONS = "units=dimensionless-quadrature-d2alpha squeeze=s>0-squeezes-real-axis"

_COLUMNS = {
    "eval.v1": ["family", "gamma", "s", "a_re", "a_im", "b_re", "b_im", "wigner", "husimi"],
    "bell.v1": [
        "family", "gamma", "s", "scheme", "value",
        "a_re", "a_im", "ap_re", "ap_im", "b_re", "b_im", "bp_re", "bp_im",
        "starts_converged", "best_start_index",
    ],
    "sweep.v1": [
        "family", "scheme", "gamma", "s", "value",
        "a_re", "a_im", "ap_re", "ap_im", "b_re", "b_im", "bp_re", "bp_im",
        "starts_converged", "error",
    ],
    "experiment-threshold.v1": ["scheme", "g", "fidelity", "value"],
    "experiment-ideal.v1": [
        "scheme", "ideal", "value",
        "a_re", "a_im", "ap_re", "ap_im", "b_re", "b_im", "bp_re", "bp_im",
        "starts_converged", "best_start_index",
    ],
    "oracle-check.v1": [
        "family", "n_points", "max_wigner_error", "max_husimi_error", "worst_case",
    ],
}


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parse_floats(text: str, n_expected: int | None = None) -> list[float]:
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated decimals, got {text!r}: {exc}")
    if n_expected is not None and len(vals) != n_expected:
        raise UsageError(f"expected {n_expected} comma-separated decimals, got {text!r}")
    return vals


def _parse_points(text: str) -> list[list[float]]:
    pts = []
    for tok in text.split(";"):
        if not tok.strip():
            continue
        vals = _parse_floats(tok)
        if len(vals) not in (2, 4):
            raise UsageError(f"point {tok!r} must have 2 or 4 components")
        pts.append(vals)
    if not pts:
        raise UsageError("no points given")
    return pts


def _parse_axis(text: str) -> list[float]:
    """Either 'start:stop:n' (inclusive linspace) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid spec {text!r} must be start:stop:n")
        try:
            start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(f"bad grid spec {text!r}: {exc}")
        if n < 1:
            raise UsageError("grid needs at least one point")
        if n == 1:
            return [start]
        step = (stop - start) / (n - 1)
        return [start + i * step for i in range(n)]
    return _parse_floats(text)


def _parse_grid_points(grid: str, fixed_b: str | None) -> list[list[float]]:
    parts = grid.split(":")
    if len(parts) == 3:
        re_axis = _parse_axis(grid)
        im_axis = re_axis
    elif len(parts) == 6:
        re_axis = _parse_axis(":".join(parts[:3]))
        im_axis = _parse_axis(":".join(parts[3:]))
    else:
        raise UsageError(
            f"grid spec {grid!r} must be remin:remax:n or remin:remax:n:immin:immax:m"
        )
    b = _parse_floats(fixed_b, 2) if fixed_b else None
    points = []
    for re in re_axis:
        for im in im_axis:
            points.append([re, im] + (b if b else []))
    return points


def _load_config_defaults(argv: list[str]) -> dict:
    """Pre-scan for --config and turn key=value lines into parser defaults."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return {}
    defaults = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, value = line.split("=", 1)
                raw = key.strip()
                defaults[raw.replace("-", "_")] = (raw, value.strip())
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    return defaults


def _add_common(parser: argparse.ArgumentParser, default_format: str = "csv") -> None:
    parser.add_argument("--format", choices=("csv", "json"), default=default_format,
                        help="output format (default %(default)s)")
    parser.add_argument("--output", default=None, metavar="PATH",
                        help="write to PATH atomically instead of stdout")
    parser.add_argument("--server", default=None, metavar="URL",
                        help="remote service URL (default: run in-process)")
    parser.add_argument("--config", default=None, metavar="FILE",
                        help="key=value defaults file; flags override")


def _add_optimizer(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n-starts", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--box-halfwidth", type=float, default=None)
    parser.add_argument("--local-tol", type=float, default=None)
    parser.add_argument("--max-iter", type=int, default=None)


def _optimizer_payload(args) -> dict | None:
    opts = {
        "n_starts": args.n_starts,
        "seed": args.seed,
        "box_halfwidth": args.box_halfwidth,
        "local_tol": args.local_tol,
        "max_iter": args.max_iter,
    }
    opts = {k: v for k, v in opts.items() if v is not None}
    return opts or None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catbell",
        description="Phase-space Bell tests for squeezed cat states.",
    )
    parser.add_argument("--version", action="version", version=f"catbell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate Wigner and Husimi values on points")
    p_eval.add_argument("--family", required=True)
    p_eval.add_argument("--gamma", type=float, required=True,
                        help="state amplitude (decimal only; e.g. 1.1401754251 for sqrt(1.3))")
    p_eval.add_argument("--s", type=float, default=0.0)
    p_eval.add_argument("--points", default=None,
                        help="semicolon-separated points 're,im' or 'a_re,a_im,b_re,b_im'")
    p_eval.add_argument("--grid", default=None,
                        help="remin:remax:n[:immin:immax:m] mesh over one mode")
    p_eval.add_argument("--fixed-b", default=None, metavar="RE,IM",
                        help="hold mode b at this point when --grid is used on a two-mode family")
    _add_common(p_eval)

    p_bell = sub.add_parser("bell", help="maximize a Bell functional for one state")
    p_bell.add_argument("--family", required=True)
    p_bell.add_argument("--gamma", type=float, required=True)
    p_bell.add_argument("--s", type=float, default=0.0)
    p_bell.add_argument("--scheme", required=True)
    _add_optimizer(p_bell)
    _add_common(p_bell)

    p_sweep = sub.add_parser("sweep", help="optimize over a (gamma, s) grid")
    p_sweep.add_argument("--family", required=True)
    p_sweep.add_argument("--scheme", required=True)
    p_sweep.add_argument("--gamma-grid", required=True, help="start:stop:n or comma list")
    p_sweep.add_argument("--s-grid", required=True, help="start:stop:n or comma list")
    _add_optimizer(p_sweep)
    _add_common(p_sweep)

    p_exp = sub.add_parser("experiment", help="realistic-state fidelity/Bell analysis")
    p_exp.add_argument("--scheme", required=True)
    p_exp.add_argument("--mode", choices=("threshold", "ideal"), default=None,
                       help="default: ideal when --ideal is given, else threshold")
    p_exp.add_argument("--ideal", choices=("phi2", "sscs"), default=None)
    p_exp.add_argument("--g-grid", default=None, help="start:stop:n or comma list of gains")
    _add_optimizer(p_exp)
    _add_common(p_exp)

    p_oracle = sub.add_parser("oracle-check", help="analytic vs Fock-engine equivalence suite")
    p_oracle.add_argument("--families", default=None, help="comma list (default: all)")
    p_oracle.add_argument("--gammas", default=None, help="comma list of amplitudes")
    p_oracle.add_argument("--s-values", default=None, help="comma list of squeeze values")
    p_oracle.add_argument("--n-points", type=int, default=25)
    p_oracle.add_argument("--tolerance", type=float, default=1e-8)
    p_oracle.add_argument("--seed", type=int, default=7)
    p_oracle.add_argument("--point-radius", type=float, default=1.25)
    p_oracle.add_argument("--perturb", type=float, default=0.0,
                          help="test hook: offset added to analytic values to force a mismatch")
    _add_common(p_oracle, default_format="json")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


# ---------------------------------------------------------------------------
# service client
# ---------------------------------------------------------------------------

def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    if server:
        return httpx.post(server.rstrip("/") + path, json=payload, timeout=None)

    from .service import create_app

    transport = httpx.ASGITransport(app=create_app())

    async def go():
        async with httpx.AsyncClient(
            transport=transport, base_url="http://catbell.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _handle_error(resp: httpx.Response) -> int:
    try:
        body = resp.json()
    except Exception:
        body = {}
    err = body.get("error")
    if err:
        kind = err.get("kind", "numerical")
        sys.stderr.write(f"error ({kind}): {err.get('message', '')}\n")
        return EXIT_USAGE if kind == "usage" else EXIT_NUMERICAL
    if resp.status_code == 422:  # request model validation
        sys.stderr.write(f"error (usage): {json.dumps(body.get('detail', body))}\n")
        return EXIT_USAGE
    sys.stderr.write(f"error: HTTP {resp.status_code}: {resp.text}\n")
    return EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# output formatting
# ---------------------------------------------------------------------------

def _csv_text(schema: str, rows: list[dict], comments: list[str] | None = None) -> str:
    columns = _COLUMNS[schema]
    buf = io.StringIO()
    buf.write(f"# catbell {schema} version={__version__} {_CONVENTIONS}\n")
    for line in comments or []:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else row.get(c) for c in columns])
    return buf.getvalue()


def _json_text(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".catbell-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _settings_row(settings: dict) -> dict:
    return {k: settings[k] for k in (
        "a_re", "a_im", "ap_re", "ap_im", "b_re", "b_im", "bp_re", "bp_im")}


# ---------------------------------------------------------------------------
# subcommand drivers
# ---------------------------------------------------------------------------

def _run_eval(args) -> int:
    if args.points is None and args.grid is None:
        raise UsageError("eval needs --points or --grid")
    points = []
    if args.points:
        points.extend(_parse_points(args.points))
    if args.grid:
        points.extend(_parse_grid_points(args.grid, args.fixed_b))
    payload = {"family": args.family, "gamma": args.gamma, "s": args.s, "points": points}
    resp = _post(args.server, "/eval", payload)
    if resp.status_code != 200:
        return _handle_error(resp)
    data = resp.json()
    if args.format == "json":
        _write_output(_json_text(data), args.output)
    else:
        rows = [
            dict(family=args.family, gamma=args.gamma, s=args.s, **row)
            for row in data["rows"]
        ]
        _write_output(_csv_text("eval.v1", rows), args.output)
    return EXIT_OK


def _run_bell(args) -> int:
    payload = {
        "family": args.family, "gamma": args.gamma, "s": args.s, "scheme": args.scheme,
        "optimizer": _optimizer_payload(args),
    }
    resp = _post(args.server, "/bell", payload)
    if resp.status_code != 200:
        return _handle_error(resp)
    data = resp.json()
    if args.format == "json":
        _write_output(_json_text(data), args.output)
    else:
        result = data["result"]
        row = dict(
            family=data["family"], gamma=data["gamma"], s=data["s"], scheme=data["scheme"],
            value=result["value"], starts_converged=result["starts_converged"],
            best_start_index=result["best_start_index"], **_settings_row(result["settings"]),
        )
        _write_output(_csv_text("bell.v1", [row]), args.output)
    return EXIT_OK


def _run_sweep(args) -> int:
    payload = {
        "family": args.family, "scheme": args.scheme,
        "gamma_grid": _parse_axis(args.gamma_grid), "s_grid": _parse_axis(args.s_grid),
        "optimizer": _optimizer_payload(args),
    }
    resp = _post(args.server, "/sweep", payload)
    if resp.status_code != 200:
        return _handle_error(resp)
    data = resp.json()
    if args.format == "json":
        _write_output(_json_text(data), args.output)
    else:
        rows = []
        for r in data["rows"]:
            row = dict(family=data["family"], scheme=data["scheme"], gamma=r["gamma"], s=r["s"],
                       value=r.get("value"), starts_converged=r.get("starts_converged"),
                       error=r.get("error"))
            if r.get("settings"):
                row.update(_settings_row(r["settings"]))
            rows.append(row)
        _write_output(_csv_text("sweep.v1", rows), args.output)
    return EXIT_NUMERICAL if data["n_failed"] else EXIT_OK


def _run_experiment(args) -> int:
    mode = args.mode or ("ideal" if args.ideal else "threshold")
    payload = {
        "mode": mode, "scheme": args.scheme, "ideal": args.ideal,
        "g_grid": _parse_axis(args.g_grid) if args.g_grid else None,
        "optimizer": _optimizer_payload(args),
    }
    resp = _post(args.server, "/experiment", payload)
    if resp.status_code != 200:
        return _handle_error(resp)
    data = resp.json()
    if args.format == "json":
        _write_output(_json_text(data), args.output)
        return EXIT_OK
    if mode == "ideal":
        result = data["result"]
        row = dict(scheme=data["scheme"], ideal=data["ideal"], value=result["value"],
                   starts_converged=result["starts_converged"],
                   best_start_index=result["best_start_index"],
                   **_settings_row(result["settings"]))
        _write_output(_csv_text("experiment-ideal.v1", [row]), args.output)
        return EXIT_OK
    comments = [
        f"f_star={data['f_star']}",
        f"crossing_found={data['crossing_found']}",
        f"monotone={data['monotone']}",
        f"max_normalization_deficit={data['max_normalization_deficit']}",
    ]
    if data.get("note"):
        comments.append(f"note={data['note']}")
    rows = [dict(scheme=data["scheme"], **r) for r in data["rows"]]
    _write_output(_csv_text("experiment-threshold.v1", rows, comments), args.output)
    return EXIT_OK


def _run_oracle_check(args) -> int:
    payload = {
        "families": args.families.split(",") if args.families else None,
        "gammas": _parse_floats(args.gammas) if args.gammas else None,
        "s_values": _parse_floats(args.s_values) if args.s_values else None,
        "n_points": args.n_points, "tolerance": args.tolerance, "seed": args.seed,
        "point_radius": args.point_radius, "perturb": args.perturb,
    }
    resp = _post(args.server, "/oracle-check", payload)
    if resp.status_code != 200:
        return _handle_error(resp)
    data = resp.json()
    if args.format == "json":
        _write_output(_json_text(data), args.output)
    else:
        comments = [f"passed={data['passed']}", f"tolerance={data['tolerance']}"]
        if data.get("first_failure"):
            comments.append(f"first_failure={data['first_failure']}")
        _write_output(_csv_text("oracle-check.v1", data["checks"], comments), args.output)
    if not data["passed"]:
        sys.stderr.write(f"oracle mismatch: {data.get('first_failure')}\n")
        return EXIT_MISMATCH
    return EXIT_OK


def _run_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    defaults = _load_config_defaults(argv)
    if defaults:
        subparsers = parser._subparsers._group_actions[0].choices.values()  # type: ignore[union-attr]
        known = set()
        for action in subparsers:
            known.update(a.dest for a in action._actions)
        bad = [raw for dest, (raw, _v) in defaults.items() if dest not in known]
        if bad:
            raise UsageError(f"unknown config keys: {', '.join(sorted(bad))}")
        for action in subparsers:
            dests = {a.dest for a in action._actions}
            action.set_defaults(**{k: v for k, (_raw, v) in defaults.items() if k in dests})
    args = parser.parse_args(argv)
    handlers = {
        "eval": _run_eval,
        "bell": _run_bell,
        "sweep": _run_sweep,
        "experiment": _run_experiment,
        "oracle-check": _run_oracle_check,
        "serve": _run_serve,
    }
    return handlers[args.command](args)


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except UsageError as exc:
        sys.stderr.write(f"error (usage): {exc}\n")
        return EXIT_USAGE
    except httpx.HTTPError as exc:
        sys.stderr.write(f"error (transport): {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
