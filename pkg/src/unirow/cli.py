"""Command line front end.

Exit codes: 0 ok, 1 verification failure, 2 budget exhausted or
inconclusive, 3 configuration error.
"""
import argparse
import json
import random
import sys

from . import errors as E
from .graded import Graded
from .grammar import format_descriptor, parse_descriptor, parse_element
from .ideals import IdealHandle

OK, FAILED, BUDGET, CONFIG = 0, 1, 2, 3

_BUDGET_ERRORS = (E.BudgetExhausted, E.Undecided, E.SaturationUndecided, E.NoMonicFound,
                  E.NoExponentInWindow, E.CapExceeded, E.NotEquivalent)
_FAIL_ERRORS = (E.VerificationFailure,)


class ConfigError(Exception):
    pass


def split_top(text, sep=","):
    """Split on sep outside brackets and parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    last = "".join(cur).strip()
    if last:
        out.append(last)
    return out


def _ring(args):
    if not args.ring:
        raise ConfigError("--ring is required")
    return parse_descriptor(args.ring)


def _elements(ring, text):
    return [parse_element(ring, x).value for x in split_top(text)]


def _ideal(ring, args):
    if not args.ideal:
        return None
    return IdealHandle(ring, _elements(ring, args.ideal))


def _row(ring, text, need_witness=False):
    """'[v1, ..., vn | w1, ..., wn]' or '[v1, ..., vn]'."""
    from .rows import UnimodularRow, make_row
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ConfigError(f"row {text!r} must be bracketed")
    body = text[1:-1]
    parts = split_top(body, "|")
    v = _elements(ring, parts[0])
    if len(parts) == 2:
        return UnimodularRow(ring, v, _elements(ring, parts[1]))
    if need_witness:
        raise ConfigError("row needs a witness: [v | w]")
    return make_row(v, ring)


def _window(text):
    try:
        N, D = (int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError("--window takes N,D") from None
    return N, D


def _emit(args, text):
    if args.out:
        import os
        import tempfile
        d = os.path.dirname(os.path.abspath(args.out))
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".unirow-")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, args.out)
    else:
        sys.stdout.write(text)


def _header(kind, data):
    return f"# {kind} " + json.dumps(data, sort_keys=True) + "\n"


# subcommands

def cmd_census(args):
    from .orbits import orbit_bfs, write_census
    R = _ring(args)
    census = orbit_bfs(R, args.n, _ideal(R, args), outer_length=args.outer_length)
    if not census.verify_closure(args.jobs):
        print("census closure check failed", file=sys.stderr)
        return FAILED
    if args.out:
        write_census(census, args.out)
    else:
        import os
        import tempfile
        with tempfile.TemporaryDirectory() as d:
            p = os.path.join(d, "census.txt")
            sys.stdout.write(write_census(census, p))
    print(f"census {format_descriptor(R)} n={args.n}: {len(census.rows)} rows, "
          f"{census.orbit_count} orbits", file=sys.stderr)
    return OK


def cmd_path(args):
    from .orbits import certificate_path, orbit_bfs
    R = _ring(args)
    if not args.source or not args.target:
        raise ConfigError("path needs --from and --to")
    census = orbit_bfs(R, args.n, _ideal(R, args), outer_length=args.outer_length)
    x = _elements(R, args.source.strip()[1:-1])
    y = _elements(R, args.target.strip()[1:-1])
    cert = certificate_path(census, x, y)
    data = {"ring": format_descriptor(R), "n": args.n, "ideal": args.ideal}
    text = _header("certificate", data)
    text += f"source | {cert.source.text()}\ntarget | {cert.target.text()}\nword | {cert.word.text()}\n"
    _emit(args, text)
    return OK


def _experiment_config(R, args):
    allowed = {"I", "J", "ideal", "n", "outer_length"}
    cfg = {"ring": R, "n": args.n}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        if k not in allowed:
            raise ConfigError(f"unknown experiment key {k!r}")
        if k in ("n", "outer_length"):
            cfg[k] = int(v)
        else:
            # ideals of a graded algebra's base ring are given in the base
            cfg[k] = _elements(R.base if isinstance(R, Graded) else R, v)
    if args.ideal and "ideal" not in cfg:
        cfg["ideal"] = _elements(R, args.ideal)
    return cfg


def cmd_experiment(args):
    from .experiments import lemma_experiment
    from .rings import Excision
    R = _ring(args)
    cfg = _experiment_config(R, args)
    name = args.name
    if name == "artin_rees":
        return _artin_rees(R, cfg, args)
    if name == "retract":
        if not isinstance(R, Excision):
            raise ConfigError("retract runs on an excision ring, retracting onto its base")
        cfg.update(target=R.base, q=lambda x: x[0], section=lambda r: (r, R.base.zero()))
    elif name not in ("exact_seq", "IJ", "L411"):
        raise ConfigError(f"unknown experiment {name!r}")
    report = lemma_experiment(name, cfg)
    text = _header("experiment", {"name": name, "ring": format_descriptor(R), "n": cfg["n"]})
    text += "\n".join(report.lines()) + "\n"
    _emit(args, text)
    return OK if report.ok else FAILED


def _artin_rees(A, cfg, args):
    from .artinrees import artin_rees_exponent
    if "I" not in cfg or "J" not in cfg:
        raise ConfigError("artin_rees needs --set I=... and --set J=...")
    w = artin_rees_exponent(A, cfg["I"], cfg["J"], _window(args.window), jobs=args.jobs)
    text = _header("experiment", {"name": "artin_rees", "ring": format_descriptor(A)})
    text += w.table() + "\n"
    _emit(args, text)
    return OK if w.verify() else FAILED


def cmd_reduce(args):
    from .reduction import final_shape_ok, random_instance, roitman_machine, trace_text
    A = _ring(args)
    if not args.ideal:
        raise ConfigError("reduce needs --ideal a")
    a = parse_element(A.base, args.ideal).value
    if args.row:
        row = _row(A, args.row, need_witness=True)
        extra = {"source": "given"}
    else:
        row = random_instance(A, a, random.Random(args.seed))
        extra = {"source": "generated", "seed": args.seed}
    trace = roitman_machine(row, a, budget=args.budget)
    extra["final_shape"] = final_shape_ok(trace.final, a)
    _emit(args, trace_text(trace, extra))
    return OK if extra["final_shape"] else FAILED


def _verify_certificate(lines, header):
    from .words import EquivalenceCertificate, parse_word
    R = parse_descriptor(header["ring"])
    fields = dict(line.split(" | ", 1) for line in lines[1:] if line)
    src = _row(R, fields["source"], need_witness=True)
    tgt = _row(R, fields["target"], need_witness=True)
    word = parse_word(R, header["n"], fields["word"])
    cert = EquivalenceCertificate(src, tgt, word)
    ok = cert.verify()
    if ok and header.get("ideal"):
        ok = word.is_relative(IdealHandle(R, _elements(R, header["ideal"])))
    return ok


def cmd_verify(args):
    from .orbits import read_census, verify_census
    from .reduction import final_shape_ok, parse_trace
    if not args.file:
        raise ConfigError("verify needs a file")
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.file}: {exc.strerror}") from None
    first = text.split("\n", 1)[0]
    try:
        if first.startswith("# census "):
            ok = verify_census(read_census(args.file), args.jobs)
        elif first.startswith("# trace "):
            trace, header = parse_trace(text)
            ok = trace.verify()
            if ok and header.get("final_shape"):
                ok = final_shape_ok(trace.final, trace.a)
        elif first.startswith("# certificate "):
            ok = _verify_certificate(text.splitlines(), json.loads(first[len("# certificate "):]))
        else:
            raise ConfigError("unrecognised file header")
    except (E.ParseError, E.NotUnimodular, E.WitnessMismatch, KeyError, ValueError) as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return FAILED
    print("verified" if ok else "verification failed")
    return OK if ok else FAILED


def cmd_witt(args):
    from .witt import determinant, pfaffian, suslin_complete3, vaserstein_V
    R = _ring(args)
    rng = random.Random(args.seed)
    rows = []
    if args.row:
        rows.append((_row(R, args.row, need_witness=True), parse_element(R, args.root).value if args.root else None))
    else:
        rows = _random_square_rows(R, rng, args.count)
    text = _header("witt", {"ring": format_descriptor(R), "seed": args.seed, "count": len(rows)})
    bad = 0
    for row, c in rows:
        V = vaserstein_V(R, row, row)
        pf = pfaffian(V)
        line = f"{row.text()} | V {V.text()} | pf {R.format(pf)}"
        good = pf == R.one()
        if c is not None:
            M = suslin_complete3(R, row, c)
            det = determinant(R, M)
            good = good and det == R.one() and list(M[0]) == list(row.v)
            body = "; ".join(", ".join(R.format(x) for x in r) for r in M)
            line += f" | completion [{body}] | det {R.format(det)}"
        bad += not good
        text += line + "\n"
    _emit(args, text)
    return OK if bad == 0 else FAILED


def _random_square_rows(R, rng, count):
    from .witt import random_square_row
    return [random_square_row(R, rng) for _ in range(count)]


def cmd_group(args):
    from .vdk import group_law_check, square_product, vdk_product
    R = _ring(args)
    if args.x and args.y:
        x = _row(R, args.x, need_witness=True)
        y = _row(R, args.y, need_witness=True)
        prod = vdk_product(x, y).row
        text = _header("group", {"ring": format_descriptor(R)})
        text += f"product | {prod.text()}\n"
        if args.root:
            sq = square_product(y, x, parse_element(R, args.root).value).row
            text += f"square | {sq.text()}\n"
        _emit(args, text)
        return OK
    pairs, failures = group_law_check(R, args.n)
    text = _header("group", {"ring": format_descriptor(R), "n": args.n, "pairs": pairs,
                             "failures": len(failures)})
    for x, y in failures:
        text += f"failure | {[R.format(a) for a in x]} | {[R.format(a) for a in y]}\n"
    _emit(args, text)
    return OK if not failures else FAILED


def cmd_power(args):
    from .vdk import CONFIRMED, INCONCLUSIVE, OrbitClassRep, goodness_experiment
    R = _ring(args)
    if not args.row:
        raise ConfigError("power needs --row")
    row = _row(R, args.row)
    census = None
    if R.finite:
        from .orbits import orbit_bfs
        census = orbit_bfs(R, row.n, _ideal(R, args), outer_length=args.outer_length)
    rec = goodness_experiment(OrbitClassRep(row, _ideal(R, args)), args.k, args.budget, census=census)
    text = _header("power", {"ring": format_descriptor(R), "k": args.k, "status": rec.status})
    text += f"claim | {rec.claim}\n"
    if rec.certificate is not None:
        text += f"word | {rec.certificate.word.text()}\n"
    for note in rec.notes:
        text += f"note | {note}\n"
    _emit(args, text)
    if rec.status == CONFIRMED:
        return OK
    return BUDGET if rec.status == INCONCLUSIVE else FAILED


COMMANDS = {
    "census": cmd_census, "path": cmd_path, "experiment": cmd_experiment,
    "reduce": cmd_reduce, "verify": cmd_verify, "witt": cmd_witt,
    "group": cmd_group, "power": cmd_power,
}


def build_parser():
    p = argparse.ArgumentParser(prog="unirow", description="Exact unimodular-row experiments.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("name", nargs="?", help="experiment name or file to verify")
    p.add_argument("--ring")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--ideal")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--window", default="8,8")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--row")
    p.add_argument("--from", dest="source")
    p.add_argument("--to", dest="target")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--root")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--outer-length", type=int, default=1)
    p.add_argument("--set", action="append", help="experiment key=value")
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else CONFIG
    if args.command == "verify":
        args.file = args.name
    try:
        _window(args.window)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG
    except _FAIL_ERRORS as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return FAILED
    except _BUDGET_ERRORS as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return BUDGET
    except E.UnirowError as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return CONFIG


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
