"""Command line front end.

Subcommands: solve (problem file -> delta file + certificate), verify
(recheck a delta against a pencil and pairs), reproduce (bundled reference
cases), random (seeded planted problem files).

Exit codes: 0 success/pass, 1 certificate failure, 2 schema error,
3 mathematical precondition failure (prints the error class name).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import fileio
from .cases import CASE_IDS, run_case
from .errors import (
    BadParameters,
    MissingFixedPair,
    NoSpilloverError,
    SchemaError,
)
from .linalg import TAU_DEFL
from .pencil import TAG_BY_NAME, DeflatingPair, StructuredPencil
from .randomgen import (
    RANDOM_CLASSES,
    plant_problem,
    plant_star_shh,
    plant_t_shh,
)
from .shh import (
    SHHPencil,
    shh_gramian,
    shh_update,
    star_shh_core,
    t_shh_mhat,
)
from .special import QuadraticSpec, solve_quadratic
from .structured import (
    change_gramian,
    complete_core,
    parametrized_core,
    scaled_gramian_core,
    structured_update,
)
from .unstructured import UpdateProblem, UpdateResult, solve_general
from .verify import certify

_QUADRATIC_CLASSES = ("hermitian", "star-odd", "star-even")


def _fail_schema(msg: str) -> int:
    print(f"schema error: {msg}", file=sys.stderr)
    return 2


def _fail_math(exc: NoSpilloverError) -> int:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return 3


def _need(block, attr, what) -> np.ndarray:
    value = getattr(block, attr, None) if block is not None else None
    if value is None:
        raise SchemaError(f"problem file is missing {what}")
    return value


def _expected_spectrum(target_lam, fixed_lam):
    return np.concatenate(
        [np.linalg.eigvals(target_lam), np.linalg.eigvals(fixed_lam)]
    )


def _solve_unstructured(pf, tol):
    change = DeflatingPair(
        _need(pf.change, "x", "change.x"), _need(pf.change, "lam", "change.lambda")
    )
    if pf.fixed is None or pf.fixed.x is None or pf.fixed.lam is None:
        raise MissingFixedPair("the unstructured path needs the fixed pair")
    fixed = DeflatingPair(pf.fixed.x, pf.fixed.lam)
    problem = UpdateProblem(
        change,
        _need(pf.targets, "lam", "targets.lambda"),
        target_x=pf.targets.x,
        fixed=fixed,
    )
    pencil = StructuredPencil(pf.m, pf.k, None)
    result = solve_general(pencil, problem)
    cert = certify(
        pencil,
        result,
        problem,
        expected_spectrum=_expected_spectrum(problem.target_lam, fixed.lam),
        tol_defl=tol,
    )
    return result, cert


def _solve_quadratic(pf, tol):
    if pf.structure not in _QUADRATIC_CLASSES:
        raise SchemaError(
            f"quadratic problems need structure in {_QUADRATIC_CLASSES}, "
            f"got {pf.structure!r}"
        )
    spec = QuadraticSpec(
        pf.structure,
        tuple(_need(pf.change, "eigenvalues", "change.eigenvalues")),
        tuple(_need(pf.targets, "eigenvalues", "targets.eigenvalues")),
    )
    kwargs = {}
    for key in ("z1", "z2", "mhat"):
        if key in pf.parameters:
            kwargs[key] = pf.parameters[key]
    if pf.parameters.get("strategy"):
        kwargs["strategy"] = pf.parameters["strategy"]
        kwargs["slack"] = pf.parameters.get("slack", 0.0)
    result, info = solve_quadratic(pf.m, pf.k, spec, **kwargs)
    pencil = info["pencil"]
    xn = result.provenance["xc_normalized"]
    fixed_x = np.hstack([e.vector.reshape(-1, 1) for e in info["fixed"]])
    fixed_lam = np.diag([e.value for e in info["fixed"]])
    problem = UpdateProblem(
        DeflatingPair(xn, np.diag(info["lam_c"])),
        np.diag(info["lam_a"]),
        fixed=DeflatingPair(fixed_x, fixed_lam),
    )
    psd = ()
    if pf.parameters.get("strategy") == "psd-minimal":
        psd = ("delta_m", "delta_k")
    cert = certify(
        pencil,
        result,
        problem,
        expected_spectrum=_expected_spectrum(problem.target_lam, fixed_lam),
        psd=psd,
        tol_defl=tol,
    )
    return result, cert


def _core_from_parameters(pf, g, lam_c, lam_a):
    params = pf.parameters
    if "t" in params:
        return scaled_gramian_core(g, lam_c, lam_a, params["t"])
    if "z1" in params or "z2" in params:
        p = g.shape[0]
        z1 = params.get("z1", np.zeros((p, p)))
        z2 = params.get("z2", np.zeros((p, p)))
        if np.asarray(z1).ndim == 1:
            z1 = np.diag(z1)
        if np.asarray(z2).ndim == 1:
            z2 = np.diag(z2)
        return parametrized_core(g, lam_c, lam_a, z1, z2)
    mhat = params.get("mhat", np.zeros_like(g))
    if np.asarray(mhat).ndim == 1:
        mhat = np.diag(mhat)
    return complete_core(g, lam_c, lam_a, mhat)


def _solve_structured(pf, tol):
    tag = TAG_BY_NAME[pf.structure]
    pencil = StructuredPencil(pf.m, pf.k, tag)
    xc = _need(pf.change, "x", "change.x")
    lam_c = _need(pf.change, "lam", "change.lambda")
    lam_a = _need(pf.targets, "lam", "targets.lambda")
    g, _ = change_gramian(pencil, xc)
    core = _core_from_parameters(pf, g, lam_c, lam_a)
    result = structured_update(pencil, xc, lam_c, lam_a, core)
    fixed = None
    expected = None
    if pf.fixed is not None and pf.fixed.x is not None:
        fixed = DeflatingPair(pf.fixed.x, pf.fixed.lam)
        expected = _expected_spectrum(lam_a, fixed.lam)
    problem = UpdateProblem(
        DeflatingPair(xc, lam_c), lam_a, fixed=fixed
    )
    cert = certify(
        pencil, result, problem, expected_spectrum=expected, tol_defl=tol
    )
    return result, cert


def _solve_shh(pf, tol):
    which = "*" if pf.structure == "star-shh" else "T"
    shh = SHHPencil(pf.m, pf.k, which)
    xc = _need(pf.change, "x", "change.x")
    lam_c = _need(pf.change, "lam", "change.lambda")
    lam_a = _need(pf.targets, "lam", "targets.lambda")
    g, _ = shh_gramian(shh, xc)
    params = pf.parameters
    if pf.structure == "star-shh" and ("z1" in params or "z2" in params):
        p = g.shape[0]
        z1 = params.get("z1", np.zeros((p, p)))
        z2 = params.get("z2", np.zeros((p, p)))
        core = star_shh_core(g, lam_c, lam_a, z1, z2, params.get("num_couples", 0))
    elif pf.structure == "t-shh" and "quad_alpha" in params:
        shape = (
            params.get("num_quadruples", 0),
            params.get("num_imag_pairs", 0),
            params.get("num_real_pairs", 0),
        )
        mhat = t_shh_mhat(
            shape,
            params.get("quad_alpha", []),
            params.get("quad_beta", []),
            params.get("imag_beta", []),
            params.get("real_beta", []),
        )
        core = complete_core(g.real, lam_c, lam_a, mhat)
    else:
        core = _core_from_parameters(pf, g, lam_c, lam_a)
    result = shh_update(shh, xc, lam_c, lam_a, core)
    fixed = None
    expected = None
    if pf.fixed is not None and pf.fixed.x is not None:
        fixed = DeflatingPair(pf.fixed.x, pf.fixed.lam)
        expected = _expected_spectrum(lam_a, fixed.lam)
    problem = UpdateProblem(DeflatingPair(xc, lam_c), lam_a, fixed=fixed)
    plain = StructuredPencil(pf.m, pf.k, None)
    cert = certify(
        plain, result, problem, expected_spectrum=expected, tol_defl=tol
    )
    # SHH structure residuals of the updated pencil
    from .linalg import fnorm
    from .pencil import star as star_op

    j = shh.j
    m1 = pf.m + result.delta_m
    k1 = pf.k + result.delta_k
    jm, jk = j @ m1, j @ k1
    cert.structure_residuals["jm_updated_skew"] = fnorm(
        star_op(jm, which) + jm
    ) / max(fnorm(jm), 1e-300)
    cert.structure_residuals["jk_updated_sym"] = fnorm(
        star_op(jk, which) - jk
    ) / max(fnorm(jk), 1e-300)
    return result, cert


def cmd_solve(args) -> int:
    try:
        pf = fileio.load_problem(args.input)
    except SchemaError as exc:
        return _fail_schema(str(exc))
    tol = args.tol if args.tol is not None else TAU_DEFL
    try:
        if args.unstructured or pf.structure == "unstructured":
            result, cert = _solve_unstructured(pf, tol)
        elif args.quadratic or pf.quadratic:
            result, cert = _solve_quadratic(pf, tol)
        elif pf.structure in ("star-shh", "t-shh"):
            result, cert = _solve_shh(pf, tol)
        else:
            result, cert = _solve_structured(pf, tol)
    except SchemaError as exc:
        return _fail_schema(str(exc))
    except NoSpilloverError as exc:
        return _fail_math(exc)
    fileio.save_result(args.out, result, cert)
    for line in cert.summary_lines():
        print(line)
    return 0 if cert.passed else 1


def cmd_verify(args) -> int:
    try:
        m, k, structure = fileio.load_pencil(args.pencil)
        dm, dk = fileio.load_delta(args.delta)
        pairs = fileio.load_pairs(args.pairs)
    except SchemaError as exc:
        return _fail_schema(str(exc))
    targets = pairs.get("targets")
    if targets is None or targets.x is None or targets.lam is None:
        return _fail_schema("pairs file needs targets with x and lambda")
    tol = args.tol if args.tol is not None else TAU_DEFL
    try:
        tag = TAG_BY_NAME.get(structure)
        pencil = StructuredPencil(m, k, tag)
        fixed = None
        if "fixed" in pairs and pairs["fixed"].x is not None:
            fixed = DeflatingPair(pairs["fixed"].x, pairs["fixed"].lam)
        problem = UpdateProblem(
            DeflatingPair(targets.x, targets.lam),
            targets.lam,
            target_x=targets.x,
            fixed=fixed,
        )
        cert = certify(
            pencil, UpdateResult(dm, dk), problem, tol_defl=tol
        )
    except NoSpilloverError as exc:
        return _fail_math(exc)
    for line in cert.summary_lines():
        print(line)
    return 0 if cert.passed else 1


def cmd_reproduce(args) -> int:
    ids = CASE_IDS if args.case == "all" else (args.case,)
    ok = True
    for cid in ids:
        report = run_case(cid)
        print("\n".join(report.lines(show_matrices=not args.brief)))
        ok = ok and report.passed
    return 0 if ok else 1


def _random_six_class(args):
    planted = plant_problem(args.seed, args.n, args.p, args.klass)
    rng = np.random.default_rng([args.seed, 777])
    pf = fileio.ProblemFile(
        structure=args.klass,
        m=planted.pencil.m,
        k=planted.pencil.k,
        change=fileio.PairBlock(x=planted.change.x, lam=planted.change.lam),
        targets=fileio.PairBlock(lam=planted.target_lam),
        parameters={"t": float(np.round(rng.uniform(-0.5, 0.5), 6))},
    )
    return pf, planted.fixed


def _random_star_shh(args):
    couples, imag = args.p // 2, args.p % 2
    planted = plant_star_shh(args.seed, args.n // 2, couples, imag)
    rng = np.random.default_rng([args.seed, 778])
    p = planted.change_lam.shape[0]
    m = planted.num_couples
    z1 = np.zeros((p, p), dtype=complex)
    z2 = np.zeros((p, p), dtype=complex)
    for j in range(m):
        a = rng.standard_normal() + 1j * rng.standard_normal()
        b = rng.standard_normal() + 1j * rng.standard_normal()
        z1[2 * j, 2 * j + 1], z1[2 * j + 1, 2 * j] = a, -np.conj(a)
        z2[2 * j, 2 * j + 1], z2[2 * j + 1, 2 * j] = b, np.conj(b)
    for kk in range(2 * m, p):
        z1[kk, kk] = 1j * rng.standard_normal()
        z2[kk, kk] = rng.standard_normal()
    pf = fileio.ProblemFile(
        structure="star-shh",
        m=planted.shh.m,
        k=planted.shh.k,
        change=fileio.PairBlock(x=planted.change_x, lam=planted.change_lam),
        targets=fileio.PairBlock(lam=planted.target_lam),
        parameters={"z1": z1, "z2": z2, "num_couples": m},
    )
    return pf, planted.fixed


def _random_t_shh(args):
    planted = plant_t_shh(args.seed, args.n // 2)
    rng = np.random.default_rng([args.seed, 779])
    grouping = planted.grouping
    from .shh import t_shh_basis, t_shh_lambda

    xc, lam_c = t_shh_basis(grouping)
    shape = (
        len(grouping.quadruples),
        len(grouping.imag_pairs),
        len(grouping.real_pairs),
    )
    lam_a = t_shh_lambda(shape, *planted.target_groups)
    params = {
        "num_quadruples": shape[0],
        "num_imag_pairs": shape[1],
        "num_real_pairs": shape[2],
        "quad_alpha": list(np.round(rng.standard_normal(shape[0]), 6)),
        "quad_beta": list(np.round(rng.standard_normal(shape[0]), 6)),
        "imag_beta": list(np.round(rng.standard_normal(shape[1]), 6)),
        "real_beta": list(np.round(rng.standard_normal(shape[2]), 6)),
    }
    pf = fileio.ProblemFile(
        structure="t-shh",
        m=planted.shh.m,
        k=planted.shh.k,
        change=fileio.PairBlock(x=xc, lam=lam_c),
        targets=fileio.PairBlock(lam=lam_a),
        parameters=params,
    )
    return pf, planted.fixed


def cmd_random(args) -> int:
    if args.klass not in RANDOM_CLASSES:
        return _fail_schema(f"class must be one of {RANDOM_CLASSES}")
    try:
        if args.klass == "star-shh":
            pf, fixed = _random_star_shh(args)
        elif args.klass == "t-shh":
            pf, fixed = _random_t_shh(args)
        else:
            pf, fixed = _random_six_class(args)
    except (BadParameters, NoSpilloverError) as exc:
        return _fail_math(exc)
    fileio.save_problem(args.out, pf)
    fileio.save_pairs(args.out + ".fixed.json", fixed.x, fixed.lam)
    print(f"wrote {args.out} and {args.out}.fixed.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nospillover",
        description="No-spillover eigenvalue updates for structured matrix pencils",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--out", required=True)
    p_solve.add_argument("--unstructured", action="store_true")
    p_solve.add_argument("--quadratic", action="store_true")
    p_solve.add_argument("--tol", type=float, default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="verify a delta file")
    p_verify.add_argument("--pencil", required=True)
    p_verify.add_argument("--delta", required=True)
    p_verify.add_argument("--pairs", required=True)
    p_verify.add_argument("--tol", type=float, default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_rep = sub.add_parser("reproduce", help="re-run a bundled reference case")
    p_rep.add_argument("case", choices=CASE_IDS + ("all",))
    p_rep.add_argument(
        "--brief", action="store_true", help="suppress the matrix comparison dump"
    )
    p_rep.set_defaults(func=cmd_reproduce)

    p_rand = sub.add_parser("random", help="write a seeded planted problem")
    p_rand.add_argument("--seed", type=int, required=True)
    p_rand.add_argument("--n", type=int, required=True)
    p_rand.add_argument("--p", type=int, required=True)
    p_rand.add_argument("--class", dest="klass", required=True)
    p_rand.add_argument("--out", required=True)
    p_rand.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
