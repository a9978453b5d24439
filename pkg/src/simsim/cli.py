"""
Command-line driver.

Exit codes: 0 affirmative, 1 negative, 2 usage or input error, 3 sampled
negative from ``decide``.  ``--json`` switches to a single JSON document on
stdout.
"""

import argparse
import json
import sys

from .annihilator import annihilator_basis, condition_c_check
from .errors import NotCommuting, PreconditionFailed, SimSimError
from .exactnum import Matrix, format_scalar, parse_scalar
from .krylov import find_cyclic_tuple, generated_subspace
from .norms import hardy_truncation_demo, inequality_sample_test, optimal_constant
from .similarity import VerdictKind, decide_similarity, synthesize_from_pair, verify_similarity
from .tuples import CommutingTuple, VectorTuple, format_monomial, standard_basis

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class InputError(Exception):
    pass


# ---------------------------------------------------------------- file IO

def _scalar(x, where):
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"{where}: scalars must be strings or integers, got {x!r}")
    if isinstance(x, int):
        return parse_scalar(str(x))
    if not isinstance(x, str):
        raise InputError(f"{where}: expected a scalar literal, got {x!r}")
    try:
        return parse_scalar(x)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def _matrix(data, where, n=None):
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise InputError(f"{where}: expected a non-empty list of rows")
    rows = len(data)
    cols = len(data[0])
    if any(len(r) != cols for r in data):
        raise InputError(f"{where}: ragged rows")
    if n is not None and (rows, cols) != (n, n):
        raise InputError(f"{where}: expected {n}x{n}, got {rows}x{cols}")
    return Matrix(rows, cols, [_scalar(x, f"{where}[{i}][{j}]")
                               for i, r in enumerate(data) for j, x in enumerate(r)])


def _vectors(data, where, n):
    if not isinstance(data, list) or not all(isinstance(v, list) for v in data):
        raise InputError(f"{where}: expected a list of vectors")
    out = []
    for t, v in enumerate(data):
        if len(v) != n:
            raise InputError(f"{where}[{t}]: expected length {n}, got {len(v)}")
        out.append([_scalar(x, f"{where}[{t}][{i}]") for i, x in enumerate(v)])
    return VectorTuple(out, n=n)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def load_tuple_file(path):
    """Return (matrices, vectors-or-None) from a tuple file."""
    doc = _read_json(path)
    if not isinstance(doc, dict) or "matrices" not in doc:
        raise InputError(f"{path}: expected an object with a 'matrices' field")
    mats_raw = doc["matrices"]
    if not isinstance(mats_raw, list) or not mats_raw:
        raise InputError(f"{path}: 'matrices' must be a non-empty list")
    n = doc.get("n")
    if n is None:
        first = mats_raw[0]
        n = len(first) if isinstance(first, list) else None
    if not isinstance(n, int) or n < 1:
        raise InputError(f"{path}: bad dimension n")
    mats = [_matrix(M, f"{path}: matrices[{i}]", n) for i, M in enumerate(mats_raw)]
    if "m" in doc and doc["m"] != len(mats):
        raise InputError(f"{path}: declared m={doc['m']} but {len(mats)} matrices given")
    vectors = None
    if "vectors" in doc:
        vectors = _vectors(doc["vectors"], f"{path}: vectors", n)
        if "k" in doc and doc["k"] != vectors.k:
            raise InputError(f"{path}: declared k={doc['k']} but {vectors.k} vectors given")
    return mats, vectors


def load_vectors_file(path, n):
    doc = _read_json(path)
    if isinstance(doc, dict):
        if "vectors" not in doc:
            raise InputError(f"{path}: expected a 'vectors' field")
        V = _vectors(doc["vectors"], f"{path}: vectors", n)
        if "k" in doc and doc["k"] != V.k:
            raise InputError(f"{path}: declared k={doc['k']} but {V.k} vectors given")
        return V
    return _vectors(doc, f"{path}: vectors", n)


def load_certificate(path, n):
    """Read S from {"S": ...}, {"certificate": {"S": ...}}, {"matrix": ...} or {"matrices": [S]}."""
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    if isinstance(doc.get("certificate"), dict):
        doc = doc["certificate"]
    for key in ("S", "matrix"):
        if key in doc:
            return _matrix(doc[key], f"{path}: {key}", n)
    if isinstance(doc.get("matrices"), list) and len(doc["matrices"]) == 1:
        return _matrix(doc["matrices"][0], f"{path}: matrices[0]", n)
    raise InputError(f"{path}: no matrix found (expected 'S', 'matrix' or a single-entry 'matrices')")


def _tuple(mats, path):
    try:
        return CommutingTuple(mats)
    except NotCommuting as exc:
        raise InputError(f"{path}: matrices {exc.i} and {exc.j} do not commute") from None


def _pick_vectors(flag_path, embedded, n):
    if flag_path:
        return load_vectors_file(flag_path, n)
    if embedded is not None:
        return embedded
    return standard_basis(n)


# ---------------------------------------------------------------- rendering

def matrix_json(M):
    return [[format_scalar(x) for x in M.row(i)] for i in range(M.rows)]


def vector_json(v):
    return [format_scalar(x) for x in v]


def poly_json(P):
    return {
        "text": str(P),
        "components": [
            [{"monomial": list(alpha), "coeff": format_scalar(c)}
             for (alpha, j), c in P.terms() if j == comp]
            for comp in range(P.k)
        ],
    }


def _indent(text, pad="  "):
    return "\n".join(pad + line for line in text.splitlines())


class Report:
    """Accumulates human lines and JSON payload for one command."""

    def __init__(self, command, as_json):
        self.command = command
        self.as_json = as_json
        self.lines = []
        self.payload = {}

    def line(self, text=""):
        self.lines.append(text)

    def emit(self, result, code, out):
        if self.as_json:
            doc = {"command": self.command, "result": result, "exit_code": code}
            doc.update(self.payload)
            out.write(json.dumps(doc, indent=2) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")
        return code


# ---------------------------------------------------------------- commands

def cmd_commute(args, rep):
    mats, _ = load_tuple_file(args.file)
    rep.payload.update(n=mats[0].rows, m=len(mats))
    try:
        CommutingTuple(mats)
    except NotCommuting as exc:
        rep.payload["failing_pair"] = [exc.i, exc.j]
        rep.line(f"not commuting: A{exc.i} A{exc.j} != A{exc.j} A{exc.i} (pair ({exc.i}, {exc.j}))")
        return "not-commuting", EXIT_NO
    rep.line(f"commuting: {len(mats)} matrices of size {mats[0].rows}x{mats[0].rows}")
    return "commuting", EXIT_YES


def cmd_cyclic(args, rep):
    mats, embedded = load_tuple_file(args.file)
    T = _tuple(mats, args.file)
    U = load_vectors_file(args.vectors, T.n) if args.vectors else embedded
    if U is not None:
        L = generated_subspace(T, U)
        ok = L.dim == T.n
        rep.payload.update(k=U.k, dim=L.dim, n=T.n, cyclic=ok)
        rep.line(f"{'cyclic' if ok else 'not cyclic'}: closure dimension {L.dim} of {T.n} (k = {U.k})")
        return ("cyclic" if ok else "not-cyclic"), (EXIT_YES if ok else EXIT_NO)
    strategy = "random" if args.random else "greedy"
    U = find_cyclic_tuple(T, strategy, seed=args.seed, trials=args.trials)
    rep.payload.update(k=U.k, n=T.n, strategy=strategy,
                       vectors=[vector_json(v) for v in U])
    rep.line(f"cyclic tuple found ({strategy}): k = {U.k}")
    for j, v in enumerate(U):
        rep.line(f"  u{j + 1} = (" + ", ".join(format_scalar(x) for x in v) + ")")
    return "cyclic", EXIT_YES


def cmd_annihilator(args, rep):
    mats, embedded = load_tuple_file(args.file)
    T = _tuple(mats, args.file)
    U = _pick_vectors(args.vectors, embedded, T.n)
    if args.max_degree < 0:
        raise InputError("--max-degree must be >= 0")
    basis = annihilator_basis(T, U, args.max_degree)
    rep.payload.update(max_degree=args.max_degree, k=U.k, dimension=len(basis),
                       basis=[poly_json(P) for P in basis])
    rep.line(f"annihilator up to degree {args.max_degree}: dimension {len(basis)}")
    for P in basis:
        rep.line(f"  {P}")
    return "ok", EXIT_YES


def _pair(args):
    mats_a, emb_a = load_tuple_file(args.file_a)
    mats_b, emb_b = load_tuple_file(args.file_b)
    TA, TB = _tuple(mats_a, args.file_a), _tuple(mats_b, args.file_b)
    if TA.m != TB.m:
        raise InputError(f"tuple lengths differ: {TA.m} vs {TB.m}")
    return TA, emb_a, TB, emb_b


def _pair_with_vectors(args):
    TA, emb_a, TB, emb_b = _pair(args)
    U = _pick_vectors(args.vectors_a, emb_a, TA.n)
    V = _pick_vectors(args.vectors_b, emb_b, TB.n)
    if U.k != V.k:
        raise InputError(f"vector tuples have different sizes: {U.k} vs {V.k}")
    return TA, U, TB, V


def cmd_condition_c(args, rep):
    TA, U, TB, V = _pair_with_vectors(args)
    cc = condition_c_check(TA, U, TB, V)
    dA, dB, dC = cc.dims
    rep.payload.update(holds=cc.holds, dims={"dA": dA, "dB": dB, "dC": dC})
    rep.line(f"condition (c) {'holds' if cc.holds else 'fails'}: dA = {dA}, dB = {dB}, dC = {dC}")
    if cc.witness is not None:
        rep.payload["witness"] = poly_json(cc.witness)
        rep.line(f"witness: {cc.witness}")
    return ("holds" if cc.holds else "fails"), (EXIT_YES if cc.holds else EXIT_NO)


def cmd_synthesize(args, rep):
    TA, U, TB, V = _pair_with_vectors(args)
    try:
        cert = synthesize_from_pair(TA, U, TB, V)
    except PreconditionFailed as exc:
        rep.payload["reason"] = str(exc)
        if exc.witness is not None:
            rep.payload["witness"] = poly_json(exc.witness)
        rep.line(f"precondition failed: {exc}")
        return "precondition-failed", EXIT_NO
    rep.payload.update(S=matrix_json(cert.S), S_inverse=matrix_json(cert.S_inverse),
                       verified=cert.checked)
    rep.line("S =")
    rep.line(_indent(str(cert.S)))
    rep.line(f"verified: {str(cert.checked).lower()}")
    return "synthesized", EXIT_YES


def cmd_verify(args, rep):
    TA, _, TB, _ = _pair(args)
    if TA.n != TB.n:
        raise InputError(f"dimensions differ: {TA.n} vs {TB.n}")
    S = load_certificate(args.certificate, TA.n)
    ok = verify_similarity(TA, TB, S)
    rep.payload["verified"] = ok
    rep.line("verified: S A_l = B_l S for all l, S invertible" if ok else "not verified")
    return ("verified" if ok else "not-verified"), (EXIT_YES if ok else EXIT_NO)


def cmd_decide(args, rep):
    TA, _, TB, _ = _pair(args)
    if TA.n != TB.n:
        raise InputError(f"dimensions differ: {TA.n} vs {TB.n}")
    if args.trials < 1 or args.grid < 2 * TA.n:
        raise InputError(f"need --trials >= 1 and --grid >= {2 * TA.n}")
    v = decide_similarity(TA, TB, trials=args.trials, grid_size=args.grid, seed=args.seed)
    rep.payload.update(verdict=v.kind.value, intertwiner_dim=v.intertwiner_dim)
    rep.line(f"verdict: {v.kind.value}")
    rep.line(f"intertwiner space dimension: {v.intertwiner_dim}")
    if v.certificate is not None:
        rep.payload["certificate"] = {"S": matrix_json(v.certificate.S),
                                      "S_inverse": matrix_json(v.certificate.S_inverse)}
        rep.line("S =")
        rep.line(_indent(str(v.certificate.S)))
    if v.reason:
        rep.payload["reason"] = v.reason
        rep.line(f"reason: {v.reason}")
    if v.kind is VerdictKind.NOT_SIMILAR_SAMPLED:
        rep.payload["failure_probability_bound"] = v.failure_probability_bound
        rep.line(f"error bound: (n/G)^T = ({TA.n}/{args.grid})^{args.trials} "
                 f"= {v.failure_probability_bound:.3e}")
    code = {VerdictKind.SIMILAR: EXIT_YES,
            VerdictKind.NOT_SIMILAR_EXACT: EXIT_NO}.get(v.kind, EXIT_INCONCLUSIVE)
    return v.kind.value, code


def cmd_constant(args, rep):
    TA, U, TB, V = _pair_with_vectors(args)
    if args.samples < 1 or args.max_degree < 0:
        raise InputError("--samples must be >= 1 and --max-degree >= 0")
    try:
        nr = optimal_constant(TA, U, TB, V, samples=args.samples,
                              max_degree=args.max_degree, seed=args.seed)
    except PreconditionFailed as exc:
        rep.payload["reason"] = str(exc)
        if exc.witness is not None:
            rep.payload["witness"] = poly_json(exc.witness)
        rep.line(f"precondition failed: {exc}")
        return "precondition-failed", EXIT_NO
    test = inequality_sample_test(TA, U, TB, V, nr.c, samples=args.samples,
                                  max_degree=args.max_degree, seed=args.seed)
    lo, hi = nr.sampled_ratio_range
    rep.payload.update(c=nr.c, norm_S=nr.norm_S, norm_S_inverse=nr.norm_S_inverse,
                       sampled_ratio_range=[lo, hi], S=matrix_json(nr.S),
                       inequality={"passed": test.passed, "worst_ratio": test.worst_ratio,
                                   "samples": test.samples})
    rep.line(f"c = {nr.c:.12g}  (||S|| = {nr.norm_S:.12g}, ||S^-1|| = {nr.norm_S_inverse:.12g})")
    rep.line(f"sampled ratio range: [{lo:.12g}, {hi:.12g}]")
    rep.line(f"inequality on {test.samples} samples (degree <= {args.max_degree}): "
             f"{'passed' if test.passed else 'FAILED'}, worst ratio {test.worst_ratio:.12g}")
    return ("passed" if test.passed else "failed"), (EXIT_YES if test.passed else EXIT_NO)


def cmd_hardy_demo(args, rep):
    if args.n_max < 2:
        raise InputError("--n-max must be >= 2")
    rows = hardy_truncation_demo(args.n_max)
    ok = all(r.condition_c_holds and r.c_n >= r.lower_bound * (1 - 1e-9) for r in rows)
    rep.payload["rows"] = [{"n": r.n, "condition_c_holds": r.condition_c_holds,
                            "c_n": r.c_n, "lower_bound": r.lower_bound} for r in rows]
    rep.line(f"{'n':>4}  {'cond (c)':>8}  {'c_n':>14}  {'2^(n-1)':>10}")
    for r in rows:
        rep.line(f"{r.n:>4}  {str(r.condition_c_holds).lower():>8}  {r.c_n:>14.6f}  {r.lower_bound:>10.0f}")
    return ("ok" if ok else "failed"), (EXIT_YES if ok else EXIT_NO)


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"usage: {message}")


def build_parser():
    p = _Parser(prog="simsim", description="Simultaneous similarity of commuting matrix tuples.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = add("commute", "check pairwise commutativity")
    sp.add_argument("file")

    sp = add("cyclic", "test or search for a cyclic vector tuple")
    sp.add_argument("file")
    sp.add_argument("--vectors")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--greedy", action="store_true")
    grp.add_argument("--random", action="store_true")
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("annihilator", "annihilating polynomial tuples up to a degree")
    sp.add_argument("file")
    sp.add_argument("--vectors")
    sp.add_argument("--max-degree", type=int, required=True)

    for name, help_ in (("condition-c", "compare the two annihilators"),
                        ("synthesize", "build S from matched cyclic tuples"),
                        ("constant", "norm constant and sampled two-sided inequality")):
        sp = add(name, help_)
        sp.add_argument("file_a")
        sp.add_argument("file_b")
        sp.add_argument("--vectors-a")
        sp.add_argument("--vectors-b")
        if name == "constant":
            sp.add_argument("--samples", type=int, default=1000)
            sp.add_argument("--max-degree", type=int, default=6)
            sp.add_argument("--seed", type=int, default=0)

    sp = add("decide", "decide simultaneous similarity")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--grid", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("verify", "check a similarity certificate exactly")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp.add_argument("--certificate", required=True)

    sp = add("hardy-demo", "truncated Hardy-space shift table")
    sp.add_argument("--n-max", type=int, required=True)
    return p


COMMANDS = {
    "commute": cmd_commute,
    "cyclic": cmd_cyclic,
    "annihilator": cmd_annihilator,
    "condition-c": cmd_condition_c,
    "synthesize": cmd_synthesize,
    "verify": cmd_verify,
    "decide": cmd_decide,
    "constant": cmd_constant,
    "hardy-demo": cmd_hardy_demo,
}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        rep = Report(args.command, args.json)
        result, code = COMMANDS[args.command](args, rep)
    except (InputError, SimSimError, ValueError) as exc:
        err.write(f"simsim: error: {exc}\n")
        return EXIT_ERROR
    return rep.emit(result, code, out)


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
