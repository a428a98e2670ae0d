"""Command line entry point: ``coxtwist <command> ...``.

Exit codes: 0 success (an UNKNOWN verdict is still a success), 1 usage or
invalid request, 2 parse error, 3 capacity guard, 4 invariant violation.
"""

import argparse
import hashlib
import json
import sys

from .diagram import parse_diagram, dump_diagram
from .errors import CoxTwistError, DomainError
from .report import analyze, to_dot
from .separation import separating_spherical_products


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    return parse_diagram(text)


def _names(arg):
    return [s for s in (x.strip() for x in arg.split(",")) if s]


def _emit(doc, out=None):
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _progress(msg):
    print(msg, file=sys.stderr, flush=True)


def _cert_id(form):
    return hashlib.sha256(form.certificate).hexdigest()[:16]


def _moves_json(path):
    return [M.to_json() for M in path]


# ---------------------------------------------------------------------------
# commands

def cmd_analyze(args):
    D = _load(args.path)
    rep = analyze(D, timing=args.timing)
    if args.dot:
        from .standard import standard_separation
        st = standard_separation(D)
        tags = ["I" if A in st.type1 else "II" for A in st.family]
        text = to_dot(D, st.family, tags)
        if args.dot == "-":
            sys.stdout.write(text)
        else:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(text)
    if args.plot:
        from .plotting import plot_diagram
        from .standard import standard_separation
        plot_diagram(D, args.plot, standard_separation(D).family, title=args.path)
    if args.dot != "-":
        sys.stdout.write(rep.dumps())
    return 0


def cmd_twist(args):
    from .twist import apply_twist, elementary_move, general_move

    D = _load(args.path)
    U, Y = _names(args.u), _names(args.side)
    try:
        Umask, Ymask = D.mask(U), D.mask(Y)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    if Umask not in separating_spherical_products(D):
        from .diagram import is_spherical_product
        if not is_spherical_product(D, Umask):
            raise DomainError("U is not a spherical-product subset")
        raise DomainError("U does not separate S")
    if args.pi:
        pairs = dict(p.split(":") for p in _names(args.pi))
        M = general_move(D, Umask, Ymask, pairs)
    else:
        M = elementary_move(D, Umask, Ymask, sigma=_names(args.sigma) if args.sigma else None)
    res = apply_twist(D, M)
    if M.is_trivial():
        print("warning: the permutation of U is the identity; the result is a renamed copy",
              file=sys.stderr)
    pi = ", ".join(f"{a}->{b}" for a, b in M.pi)
    note = (f"twist of {args.path}: U={{{','.join(M.U)}}} sigma={{{','.join(M.sigma)}}} "
            f"Y={{{','.join(M.Y)}}} pi: {pi}")
    text = dump_diagram(res.diagram, note=note)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_orbit(args):
    from .twist import twist_orbit

    D = _load(args.path)
    _progress(f"twist orbit of {args.path} to depth {args.depth}")
    entries = twist_orbit(D, args.depth, max_states=args.max_states)
    _progress(f"{len(entries)} states")
    _emit({"schema": 1, "depth": args.depth, "count": len(entries),
           "states": [{"certificate": _cert_id(e.form), "path": _moves_json(e.path)}
                      for e in entries]}, args.out)
    return 0


def _verdict_json(v):
    doc = {"schema": 1, "verdict": v.status}
    if v.reason:
        doc["reason"] = v.reason
    if v.witness is not None:
        w = v.witness
        if "path" in w:
            doc["witness"] = {"path": _moves_json(w["path"]), "isomorphism": w["isomorphism"]}
        else:
            doc["witness"] = {
                "type1": [{"from": list(a), "to": list(b)} for a, b in w["type1"]],
                "type2": [{"from": list(a), "to": list(b), "path": _moves_json(p["path"]),
                           "isomorphism": p["isomorphism"]} for a, b, p in w["type2"]],
            }
    return doc


def cmd_equiv(args):
    from .twist import twist_equivalent

    D1, D2 = _load(args.first), _load(args.second)
    _progress(f"searching twists of {args.first} to depth {args.depth}")
    _emit(_verdict_json(twist_equivalent(D1, D2, args.depth, max_states=args.max_states)), args.out)
    return 0


def cmd_compat(args):
    from .twist import type12_compatible

    D1, D2 = _load(args.first), _load(args.second)
    _progress(f"matching standard separations to depth {args.depth}")
    _emit(_verdict_json(type12_compatible(D1, D2, args.depth, max_states=args.max_states)), args.out)
    return 0


def cmd_untangle(args):
    from .untangle import loop_automorphisms, untangle_reachable

    D = _load(args.path)
    try:
        if args.loops:
            U = D.mask(_names(args.loops))
            perms = loop_automorphisms(D, U, maxlen=args.maxlen)
            _emit({"schema": 1, "subset": list(D.members(U)), "order": len(perms),
                   "permutations": [
                       {"map": {D.names[a]: D.names[b] for a, b in sorted(p.perm.items())},
                        "chain": p.path.to_json(D)} for p in perms]}, args.out)
            return 0
        if not args.source or not args.target:
            raise DomainError("give --from and --to, or --loops")
        U, U2 = D.mask(_names(args.source)), D.mask(_names(args.target))
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    path = untangle_reachable(D, U, U2, maxlen=args.maxlen)
    if path is None:
        print("no path", file=sys.stderr)
        _emit({"schema": 1, "path": None}, args.out)
    else:
        _emit({"schema": 1, "path": path.to_json(D)}, args.out)
    return 0


def cmd_oracle_verify(args):
    from .oracle import verify_omega

    D = _load(args.path)
    bad = 0
    for chk in verify_omega(D):
        members = "{" + ",".join(D.members(chk.subset)) + "}"
        if chk.status == "pass":
            print(f"pass {members}")
        elif chk.status == "skipped":
            print(f"skipped: {chk.detail} {members}")
        else:
            bad += 1
            print(f"FAIL {members}: {chk.detail}")
    return 4 if bad else 0


# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="coxtwist", description="Separations and twists of Coxeter diagrams.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="separations and standard separation of a diagram")
    a.add_argument("path")
    a.add_argument("--dot", metavar="FILE", help="also write DOT ('-' for stdout instead of JSON)")
    a.add_argument("--plot", metavar="PATH", help="write a figure (format from the suffix)")
    a.add_argument("--timing", action="store_true", help="add per-stage timings to the report")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("twist", help="apply one elementary twist")
    t.add_argument("path")
    t.add_argument("--u", required=True, metavar="NAMES", help="comma-separated U")
    t.add_argument("--side", required=True, metavar="NAMES", help="comma-separated side Y")
    t.add_argument("--sigma", metavar="NAMES", help="spherical sigma (default U_sigma)")
    t.add_argument("--pi", metavar="MAP", help="explicit permutation a:b,b:a,... of U")
    t.add_argument("--out", metavar="PATH")
    t.set_defaults(func=cmd_twist)

    for name, fn, two, text in (
            ("orbit", cmd_orbit, False, "diagrams reachable by twists, up to isomorphism"),
            ("equiv", cmd_equiv, True, "search for a twist sequence between two diagrams"),
            ("compat", cmd_compat, True, "match the standard separations of two diagrams")):
        s = sub.add_parser(name, help=text)
        if two:
            s.add_argument("first")
            s.add_argument("second")
        else:
            s.add_argument("path")
        s.add_argument("--depth", type=int, default=1)
        s.add_argument("--max-states", type=int, default=None)
        s.add_argument("--out", metavar="PATH")
        s.set_defaults(func=fn)

    u = sub.add_parser("untangle", help="untangle chains between subsets")
    u.add_argument("path")
    u.add_argument("--from", dest="source", metavar="NAMES")
    u.add_argument("--to", dest="target", metavar="NAMES")
    u.add_argument("--loops", metavar="NAMES", help="permutations induced by closed chains")
    u.add_argument("--maxlen", type=int, default=None)
    u.add_argument("--out", metavar="PATH")
    u.set_defaults(func=cmd_untangle)

    o = sub.add_parser("oracle-verify", help="check omega tables against brute force")
    o.add_argument("path")
    o.set_defaults(func=cmd_oracle_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CoxTwistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
