"""
Command-Line Front End

    python cli.py spectrum --field "gf(2^6)" --func power:3 --kind cc --c-sweep
    python cli.py ddt      --field "gf(3^2)" --func power:2 --c 2 --format csv
    python cli.py walsh    --field "gf(2^4)" --func power:3 --c 2 --m 3
    python cli.py equiv    gold-pair --m 4 --i 1 --c 2
    python cli.py equiv    apply --field "gf(2^4)" --func power:3 --map map.txt --c 2
    python cli.py paper    --only gold-uniformity --json

Elements are always given and printed as enc integers. Exit codes:
0 ok, 1 parse error, 2 invalid mathematical input, 3 work limit, 4 failed
reproduction or identity.
"""

import argparse
import csv
import io
import json
import logging
import shlex
import sys
from dataclasses import dataclass, field as dc_field, fields
from typing import Dict, List, Optional, Sequence, Tuple

import settings
from diffspec import KINDS, check_c, ddt, default_c_set, per_c_profile
from equivlab import (
    ProductAffineMap,
    ccz_invariance_check,
    construct_gold_ccz_pair,
    construct_odd_trace_ccz_pair,
    graph_image,
    load_product_map,
    random_invariance_sweep,
)
from errors import CCError, ParseError, ReproductionMismatch
from funcrep import VecFunc, inverse, parse_func_spec
from gf import FieldCtx, parse_field_spec
from reproduction import print_verdicts, run_suite, verdicts_json
from walshlab import (
    convolution_entry,
    g_sum_identity,
    per_a_certificate,
    uniformity_certificate,
    walsh_table,
)

logger = logging.getLogger(__name__)

COMMANDS = ("spectrum", "ddt", "walsh", "equiv", "paper")
COMMAND_ALIASES = {"reproduce": "paper"}
EQUIV_ACTIONS = ("apply", "swap", "gold-pair", "odd-trace-pair", "sweep")
FORMATS = ("json", "csv")


class _Parser(argparse.ArgumentParser):
    """Usage errors become ParseError (exit 1) instead of SystemExit(2)."""

    def error(self, message):
        raise ParseError(message)


# --- Configuration ---

@dataclass
class RunConfig:
    command: str
    field: Optional[str] = None
    func: Optional[str] = None
    codomain: Optional[int] = None
    c: Optional[int] = None
    c_sweep: bool = False
    c_list: Tuple[int, ...] = ()
    kind: str = "cc"
    out: Optional[str] = None
    format: str = "json"
    work_limit: int = settings.WORK_LIMIT
    seed: int = settings.DEFAULT_SEED
    threads: int = settings.DEFAULT_WORKERS
    # walsh
    m: Tuple[int, ...] = ()
    k: Tuple[int, ...] = ()
    per_a: Optional[int] = None
    table: bool = False
    convolution: bool = False
    # equiv
    action: Optional[str] = None
    map_file: Optional[str] = None
    i: int = 1
    p: Optional[int] = None
    n: Optional[int] = None
    count: int = 200
    # paper
    only: Tuple[str, ...] = ()
    json: bool = False
    extra: Dict[str, str] = dc_field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        values = {}
        for f in fields(cls):
            if f.name == "extra" or not hasattr(ns, f.name):
                continue
            v = getattr(ns, f.name)
            if isinstance(v, list):
                v = tuple(v)
            values[f.name] = v
        values["command"] = COMMAND_ALIASES.get(values["command"], values["command"])
        return cls(**values)

    def canonical(self) -> str:
        """argv string that parses back to an equal RunConfig."""
        argv: List[str] = [self.command]
        if self.command == "equiv":
            argv.append(self.action)
        defaults = RunConfig(self.command)
        for f in fields(self):
            name = f.name
            if name in ("command", "action", "extra"):
                continue
            value = getattr(self, name)
            if value == getattr(defaults, name):
                continue
            flag = "--" + _FLAG_NAMES.get(name, name.replace("_", "-"))
            if isinstance(value, bool):
                argv.append(flag)
            elif isinstance(value, tuple):
                for item in value:
                    argv += [flag, str(item)]
            else:
                argv += [flag, str(value)]
        return shlex.join(argv)

    @classmethod
    def from_canonical(cls, text: str) -> "RunConfig":
        return cls.from_namespace(build_parser().parse_args(shlex.split(text)))


_FLAG_NAMES = {"map_file": "map", "format": "format", "threads": "threads"}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", help="gf(p^n) or gf(p^n;mod=M)")
    common.add_argument("--func", help="power:d | poly:c0,c1,... | lutfile:PATH")
    common.add_argument("--codomain", type=int, help="codomain degree s (divides n)")
    sel = common.add_mutually_exclusive_group()
    sel.add_argument("--c", type=int, help="single multiplier (enc)")
    sel.add_argument("--c-sweep", action="store_true", help="every c in GF(p^s)^* except 1")
    sel.add_argument("--c-list", type=int, action="append", default=[], help="explicit multipliers")
    common.add_argument("--kind", choices=KINDS, default="cc")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--work-limit", type=int, default=settings.WORK_LIMIT)
    common.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=settings.DEFAULT_WORKERS)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--quiet", action="store_true")

    parser = _Parser(prog="cli.py", description="cc-differential uniformity toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("spectrum", parents=[common], help="per-c uniformity profile and spectra")
    sub.add_parser("ddt", parents=[common], help="full c- or cc-DDT for one c")

    p_walsh = sub.add_parser("walsh", parents=[common], help="Walsh tables and certificates")
    p_walsh.add_argument("--m", type=int, action="append", default=[], help="certificate bound (repeatable)")
    p_walsh.add_argument("--k", type=int, action="append", default=[], help="moment identity order (repeatable)")
    p_walsh.add_argument("--per-a", type=int, help="derivative shift for per-a certificates")
    p_walsh.add_argument("--table", action="store_true", help="emit the Walsh table")
    p_walsh.add_argument("--convolution", action="store_true", help="check graph-convolution entries")

    p_equiv = sub.add_parser("equiv", parents=[common], help="c-affine graph maps and c-CCZ pairs")
    p_equiv.add_argument("action", choices=EQUIV_ACTIONS)
    p_equiv.add_argument("--map", dest="map_file", help="product map file")
    p_equiv.add_argument("--m", type=int, action="append", default=[], help="field or subfield degree")
    p_equiv.add_argument("--i", type=int, default=1, help="Gold exponent index")
    p_equiv.add_argument("--p", type=int, help="characteristic (odd-trace-pair)")
    p_equiv.add_argument("--n", type=int, help="field degree (odd-trace-pair)")
    p_equiv.add_argument("--count", type=int, default=200, help="graph cases per sweep")

    p_rep = sub.add_parser(
        "paper", aliases=["reproduce"], parents=[common], help="run the reproduction suite"
    )
    p_rep.add_argument("--only", action="append", default=[], help="item id (repeatable)")
    p_rep.add_argument("--json", action="store_true", help="machine-readable verdicts")
    return parser


# --- Shared helpers ---

def _field(cfg: RunConfig) -> FieldCtx:
    if not cfg.field:
        raise ParseError(f"{cfg.command} needs --field")
    return parse_field_spec(cfg.field)


def _function(cfg: RunConfig, f: FieldCtx) -> VecFunc:
    if not cfg.func:
        raise ParseError(f"{cfg.command} needs --func")
    return parse_func_spec(f, cfg.func, cfg.codomain)


def _c_values(cfg: RunConfig, F: VecFunc) -> List[int]:
    """Validated multipliers; --c-sweep or nothing means GF(p^s)^* minus 1."""
    if cfg.c is not None:
        cs = [cfg.c]
    elif cfg.c_list:
        cs = list(cfg.c_list)
    else:
        cs = default_c_set(F)
    return [check_c(F, c) for c in cs]


def _single_c(cfg: RunConfig, F: VecFunc) -> int:
    cs = _c_values(cfg, F)
    if cfg.c is None and len(cs) != 1:
        raise ParseError(f"{cfg.command} needs a single --c")
    return cs[0]


def _dump(cfg: RunConfig, payload: Optional[dict] = None, rows: Optional[List[dict]] = None) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        rows = rows or []
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return buf.getvalue()
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
        logger.info("wrote %s", cfg.out)
    else:
        sys.stdout.write(text)


# --- Commands ---

def cmd_spectrum(cfg: RunConfig) -> str:
    f = _field(cfg)
    F = _function(cfg, f)
    cs = _c_values(cfg, F)
    profile = per_c_profile(F, cfg.kind, cs, workers=cfg.threads)
    spectra = {str(c): ddt(F, c, cfg.kind).spectrum.to_json() for c in cs}
    payload = {
        "field": f.spec,
        "func": cfg.func,
        "kind": cfg.kind,
        "profile": {str(c): u for c, u in profile.values.items()},
        "profile_spectrum": profile.spectrum.to_json(),
        "spectra": spectra,
    }
    rows = [{"c": c, "uniformity": u, "spectrum": spectra[str(c)]} for c, u in profile.values.items()]
    return _dump(cfg, payload, rows)


def cmd_ddt(cfg: RunConfig) -> str:
    f = _field(cfg)
    F = _function(cfg, f)
    c = _single_c(cfg, F)
    tab = ddt(F, c, cfg.kind)
    rows = [{"a": a, "b": int(b), "count": int(tab.table[a, j])}
            for a in range(f.order) for j, b in enumerate(tab.b_values) if tab.table[a, j]]
    payload = {
        "field": f.spec,
        "func": cfg.func,
        "kind": cfg.kind,
        "c": c,
        "uniformity": tab.uniformity,
        "spectrum": tab.spectrum.to_json(),
        "table": [[int(v) for v in row] for row in tab.table],
    }
    return _dump(cfg, payload, rows)


def cmd_walsh(cfg: RunConfig) -> str:
    f = _field(cfg)
    F = _function(cfg, f)
    c = _single_c(cfg, F)
    payload: Dict[str, object] = {"field": f.spec, "func": cfg.func, "c": c}
    rows: List[dict] = []

    # guards first: no output unless every requested certificate fits
    certificates = [uniformity_certificate(F, c, m, cfg.work_limit, strict=False) for m in cfg.m]
    payload["certificates"] = [cert.to_json() for cert in certificates]
    identities = []
    for k in cfg.k:
        walsh_side, count_side = g_sum_identity(F, c, k, cfg.work_limit)
        identities.append({"k": k, "walsh": str(walsh_side), "count": str(count_side),
                           "holds": walsh_side == count_side})
    payload["moment_identities"] = identities
    if cfg.per_a is not None:
        payload["per_a"] = [
            {"a": cert.a, "m": cert.m, "value": str(cert.value), "zero": cert.zero}
            for cert in (per_a_certificate(F, c, cfg.per_a, m, cfg.work_limit) for m in (cfg.m or (1,)))
        ]
    if cfg.convolution:
        tab = ddt(F, c)
        mismatches = sum(convolution_entry(F, c, u, int(v), strict=False) != tab.entry(u, int(v))
                         for u in range(f.order) for v in f.subfield_array(F.s))
        payload["convolution_mismatches"] = mismatches
    if cfg.table:
        table = walsh_table(F, workers=cfg.threads)
        for u in range(f.order):
            for j, v in enumerate(table.v_values):
                row = {"u": u, "v": int(v)}
                row.update({f"c_{r}": int(x) for r, x in enumerate(table.values[u, j])})
                rows.append(row)
        payload["parseval"] = table.parseval_ok()
    if cfg.format == "csv" and not cfg.table:
        rows = [{"m": cert.m, "c": cert.c, "lhs": str(cert.lhs), "equality": cert.equality}
                for cert in certificates]
    return _dump(cfg, payload, rows)


def cmd_equiv(cfg: RunConfig) -> str:
    action = cfg.action
    if action == "gold-pair":
        m = cfg.m[0] if cfg.m else 4
        F, F2, cert = construct_gold_ccz_pair(m, cfg.i, cfg.c if cfg.c is not None else 1)
        payload = {"action": action, "m": m, "i": cfg.i, "certificate": cert.to_json(),
                   "F": F.lut.tolist(), "F2": F2.lut.tolist()}
        return _dump(cfg, payload, [{"x": x, "F": int(a), "F2": int(b)} for x, (a, b) in enumerate(zip(F.lut, F2.lut))])
    if action == "odd-trace-pair":
        if cfg.p is None or cfg.n is None or not cfg.m:
            raise ParseError("odd-trace-pair needs --p, --n and --m")
        F, F2, cert = construct_odd_trace_ccz_pair(cfg.p, cfg.n, cfg.m[0], cfg.c if cfg.c is not None else 1)
        payload = {"action": action, "p": cfg.p, "n": cfg.n, "m": cfg.m[0], "certificate": cert.to_json(),
                   "F": F.lut.tolist(), "F2": F2.lut.tolist()}
        return _dump(cfg, payload, [{"x": x, "F": int(a), "F2": int(b)} for x, (a, b) in enumerate(zip(F.lut, F2.lut))])

    f = _field(cfg)
    if action == "sweep":
        s = cfg.codomain or f.n
        c = cfg.c if cfg.c is not None else f.primitive_element
        sweep = random_invariance_sweep(f, c, count=cfg.count, seed=cfg.seed, s=s)
        payload = {"action": action, "field": f.spec, "c": c, "seed": cfg.seed, "cases": sweep.cases,
                   "skipped": sweep.skipped, "failures": len(sweep.failures), "holds": sweep.holds}
        return _dump(cfg, payload, [payload])

    F = _function(cfg, f)
    if action == "swap":
        G = inverse(F)
        A = ProductAffineMap.swap(f)
    else:
        if not cfg.map_file:
            raise ParseError("apply needs --map")
        A = load_product_map(cfg.map_file, f)
        G = graph_image(A, F)
    payload: Dict[str, object] = {"action": action, "field": f.spec, "func": cfg.func, "lut": G.lut.tolist()}
    if cfg.c is not None or cfg.c_list:
        reports = [ccz_invariance_check(F, A, c, strict=False) for c in _c_values(cfg, F)]
        payload["invariance"] = [
            {"c": r.c, "c_affine": r.c_affine, "uniformity_F": r.uniformity_F,
             "uniformity_G": r.uniformity_G, "preserved": r.preserved}
            for r in reports
        ]
    return _dump(cfg, payload, [{"x": x, "y": int(y)} for x, y in enumerate(G.lut)])


def cmd_paper(cfg: RunConfig) -> Tuple[str, bool]:
    verdicts = run_suite(cfg.only or None, cfg.seed)
    passed = all(v.passed for v in verdicts)
    if cfg.json or (cfg.out and cfg.format == "json"):
        return verdicts_json(verdicts) + "\n", passed
    buf = io.StringIO()
    print_verdicts(verdicts, buf)
    return buf.getvalue(), passed


HANDLERS = {
    "spectrum": cmd_spectrum,
    "ddt": cmd_ddt,
    "walsh": cmd_walsh,
    "equiv": cmd_equiv,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        settings.configure_logging(ns.verbose, ns.quiet)
        cfg = RunConfig.from_namespace(ns)
        logger.info("running %s", cfg.canonical())
        if cfg.command == "paper":
            text, passed = cmd_paper(cfg)
            _emit(cfg, text)
            if not passed:
                raise ReproductionMismatch("reproduction suite has failing items")
            return 0
        _emit(cfg, HANDLERS[cfg.command](cfg))
        return 0
    except CCError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except KeyError as exc:
        logger.error("unknown reproduction item %s", exc)
        return ParseError.exit_code


if __name__ == "__main__":
    sys.exit(main())
