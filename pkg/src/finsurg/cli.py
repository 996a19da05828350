"""Command-line client for the service.

Each subcommand is a thin wrapper over one service endpoint.  By default the
app is driven in process through an ASGI transport, so plain CLI use opens
no sockets; set FINSURG_URL to point the same commands at a running server
(`finsurg serve`).

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import os
import sys

import httpx

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class InternalError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract here reserves 2 for failed
    # verification, so route usage problems through our own exception
    def error(self, message):
        raise UsageError(message)


def _call(method: str, path: str, payload=None) -> dict:
    """One request against the service: remote if FINSURG_URL is set,
    otherwise the app itself over an in-process transport."""

    async def go():
        base = os.environ.get("FINSURG_URL")
        if base:
            kwargs = {"base_url": base}
        else:
            from .service import app

            kwargs = {
                "transport": httpx.ASGITransport(app=app),
                "base_url": "http://finsurg.internal",
            }
        async with httpx.AsyncClient(timeout=None, **kwargs) as client:
            resp = await client.request(method, path, json=payload)
            body = resp.json()
            return resp.status_code, body

    status, body = asyncio.run(go())
    if status >= 500:
        raise InternalError(body.get("detail", "internal error"))
    if status >= 400:
        detail = body.get("detail", body)
        if isinstance(detail, list):  # pydantic validation errors
            detail = "; ".join(e.get("msg", str(e)) for e in detail)
        raise UsageError(str(detail))
    return body


def _ints(text: str, n: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated integers, got {text!r}")
    return vals


# -- output formatting


def _emit_dtable(body: dict, fmt: str) -> None:
    rows = list(enumerate(body["values"]))
    if fmt == "table":
        for i, v in rows:
            print(i, v)
    elif fmt == "json":
        print(json.dumps([{"i": i, "d": v} for i, v in rows]))
    else:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["i", "d"])
        w.writerows(rows)
        sys.stdout.write(out.getvalue())


CSV_HEADER = [
    "p", "q", "epsilon", "a", "b", "genus", "t_sequence", "match_kind",
    "match_params",
]


def _emit_candidates(body: dict, fmt: str) -> None:
    cands = body["candidates"]
    if fmt == "json":
        print(json.dumps(body, indent=2))
        return
    if fmt == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for c in cands:
            w.writerow(
                [
                    c["p"], c["q"], c["epsilon"], c["a"], c["b"], c["genus"],
                    " ".join(str(t) for t in c["t_sequence"]),
                    c["match_kind"], c["match_params"],
                ]
            )
        sys.stdout.write(out.getvalue())
        return
    for c in cands:
        t = " ".join(str(x) for x in c["t_sequence"])
        print(
            f"{c['p']}/{c['q']} eps={c['epsilon']:+d} a={c['a']} b={c['b']} "
            f"g={c['genus']} t=({t}) -> {c['match_kind']}"
            + (f" {c['match_params']}" if c["match_params"] else "")
        )
    print(f"{body['count']} candidates with p <= {body['p_max']}")


# -- subcommands


def cmd_d_lens(args) -> int:
    path = f"/d/trefoil/{args.p}/{args.q}" if args.trefoil else f"/d/lens/{args.p}/{args.q}"
    _emit_dtable(_call("GET", path), args.format)
    return EXIT_OK


def cmd_search(args) -> int:
    body = _call(
        "POST",
        "/search",
        {"p_max": args.p_max, "mode": args.mode, "jobs": args.jobs},
    )
    _emit_candidates(body, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    body = _call("POST", "/verify", {"suite": args.suite, "seed": args.seed})
    for line in body["lines"]:
        print(line)
    print(f"suite {body['suite']}: {'PASS' if body['passed'] else 'FAIL'}")
    return EXIT_OK if body["passed"] else EXIT_VERIFY_FAILED


def cmd_tseq(args) -> int:
    if args.alexander:
        payload = {"alexander": list(_ints(args.alexander))}
    elif args.torus:
        payload = {"torus": list(_ints(args.torus, 2))}
    else:
        payload = {"cable": list(_ints(args.cable, 4))}
    body = _call("POST", "/tseq", payload)
    if not body["admissible"]:
        print(f"g={body['genus']}; not admissible: {body['reason']}")
        return EXIT_OK
    t = ",".join(str(x) for x in body["t_sequence"])
    print(f"t: {t}; g={body['genus']}; admissible")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="finsurg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_dl = sub.add_parser("d-lens", help="correction-term table of a lens space")
    p_dl.add_argument("p", type=int)
    p_dl.add_argument("q", type=int)
    p_dl.add_argument("--trefoil", action="store_true",
                      help="table of the trefoil-exterior filling instead")
    p_dl.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p_dl.set_defaults(func=cmd_d_lens)

    p_se = sub.add_parser("search", help="run the finite-surgery candidate search")
    p_se.add_argument("--p-max", type=int, required=True, dest="p_max")
    p_se.add_argument("--mode", choices=["full", "pruned"], default="full")
    p_se.add_argument("--format", choices=["table", "csv", "json"], default="csv")
    p_se.add_argument("--jobs", type=int, default=None,
                      help="worker processes (default: FINSURG_JOBS or all cores)")
    p_se.set_defaults(func=cmd_search)

    p_ve = sub.add_parser("verify", help="run a verification suite")
    p_ve.add_argument(
        "--suite", required=True,
        choices=["lens-tables", "lemma42", "pruning", "progression", "reconcile"],
    )
    p_ve.add_argument("--seed", type=int, default=0)
    p_ve.set_defaults(func=cmd_verify)

    p_ts = sub.add_parser("tseq", help="torsion sequence of an L-space knot")
    group = p_ts.add_mutually_exclusive_group(required=True)
    group.add_argument("--alexander", help='symmetric coefficients "a0,a1,..."')
    group.add_argument("--torus", help='torus knot parameters "r,s"')
    group.add_argument("--cable", help='cable parameters "p1,q1,p2,q2"')
    p_ts.set_defaults(func=cmd_tseq)

    p_sv = sub.add_parser("serve", help="run the HTTP service")
    p_sv.add_argument("--host", default="127.0.0.1")
    p_sv.add_argument("--port", type=int, default=8000)
    p_sv.set_defaults(func=cmd_serve)

    return parser


_VALUE_FLAGS = ("--alexander", "--torus", "--cable")


def _absorb_dash_values(argv):
    # let --alexander "-1,1" parse: argparse would read the value as a flag
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(tok + "=" + argv[i + 1])
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = build_parser().parse_args(_absorb_dash_values(list(argv)))
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
