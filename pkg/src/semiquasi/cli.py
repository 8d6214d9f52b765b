"""Command-line entry point.

    semiquasi analyze --input problem.yaml --output report.json

writes the machine-readable report to ``report.json`` and a plain-text
report next to it (``report.txt``).  Without ``--output`` the text report
goes to stdout.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path

from .fileformat import (
    FORMAT_VERSION,
    InputError,
    NotQuasihomogeneousInput,
    ProblemInput,
    encode_polynomial,
    encode_scalar,
    load_problem,
)
from .kodaira_spencer import PairingError, ks_matrix, lie_filtrations
from .polynomial import ParseError, Polynomial, format_monomial, parse_polynomial
from .standard_basis import NotZeroDimensionalError, SingularInputError, TruncationError
from .stratification import (
    DEFAULT_SEED,
    classify_point,
    lplus_invariants,
    mu_vector,
    strata_symbolic,
    tau_at_point,
)
from .symmetry import (
    UNDETERMINED,
    GradedAutomorphism,
    GradingError,
    check_graded,
    diagonal_character,
    enumerate_diagonal,
    group_closure,
    invariant_monomials,
    lplus_normal_form,
    orbit_equivalent_contact,
    theta,
    verify_automorphism,
)
from .unfolding import PrincipalPartError, negative_unfolding, reduce_to_T_minus, specialize

COMMANDS = ("analyze", "unfold", "reduce", "ks", "strata", "tau", "classify", "theta", "invariants")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_TRUNCATION = 5
EXIT_UNDETERMINED = 6

DEFAULT_INVARIANT_DEGREE = 10


class PreconditionError(ValueError):
    pass


class Context:
    """Lazily computed pipeline stages shared by the commands."""

    def __init__(self, prob: ProblemInput):
        self.prob = prob
        self.undetermined = False
        self._u = self._M = self._strata = self._lie = self._inv = None

    @property
    def conductor(self) -> int:
        return self.prob.conductor or 1

    @property
    def u(self):
        if self._u is None:
            try:
                self._u = negative_unfolding(self.prob.f0, self.prob.w, self.prob.truncation)
            except (NotZeroDimensionalError, SingularInputError) as exc:
                raise PreconditionError(str(exc)) from exc
        return self._u

    @property
    def M(self):
        if self._M is None:
            u = self.u
            n = None
            if self.prob.dual_generators is not None:
                names = u.x_names + u.t_names
                try:
                    n = [parse_polynomial(str(s), names) for s in self.prob.dual_generators]
                except ParseError as exc:
                    raise InputError(f"dual_generators: {exc}") from exc
                if len(n) != u.k:
                    raise InputError(f"dual_generators: expected {u.k} entries, got {len(n)}")
            self._M = ks_matrix(u, n)
        return self._M

    @property
    def lie(self):
        if self._lie is None:
            self._lie = lie_filtrations(self.u, self.M)
        return self._lie

    @property
    def strata(self):
        if self._strata is None:
            seed = DEFAULT_SEED if self.prob.seed is None else self.prob.seed
            self._strata = strata_symbolic(self.M, self.u, seed=seed)
        return self._strata

    @property
    def invariants(self):
        if self._inv is None:
            self._inv = lplus_invariants(self.M, self.prob.invariant_degree)
        return self._inv

    def generators(self) -> list:
        u = self.u
        out = []
        for name, imgs in self.prob.generators.items():
            phi = GradedAutomorphism(tuple(imgs), name)
            try:
                check_graded(phi, u.w)
            except GradingError as exc:
                raise PreconditionError(f"generator {name} is not a graded automorphism: {exc}") from exc
            if not verify_automorphism(phi, u.f0, u.w):
                raise PreconditionError(f"generator {name} is not a symmetry of f0 (phi(f0) != f0)")
            out.append(phi)
        return out

    def cap(self) -> int:
        return self.prob.max_orbit or 10_000


# -- encoders -------------------------------------------------------------------------------------


def _tpoly(p: Polynomial, ctx: Context) -> dict:
    return encode_polynomial(p, tuple(1 for _ in p.variables), ctx.conductor)


def _xpoly(p: Polynomial, ctx: Context) -> dict:
    w = ctx.u.all_weights if len(p.variables) > ctx.u.w.n else ctx.prob.w.weights
    return encode_polynomial(p, w, ctx.conductor)


def _point(t, ctx: Context) -> list:
    return [encode_scalar(c, ctx.conductor) for c in t]


def _mono(e, names) -> str:
    return format_monomial(e, names)


# -- stages ---------------------------------------------------------------------------------------


def stage_unfold(ctx: Context) -> dict:
    u = ctx.u
    return {
        "mu": u.milnor.mu,
        "weights": list(u.w.weights),
        "degree": u.w.degree,
        "basis": [_mono(e, u.x_names) for e in u.milnor.basis.monomials],
        "upper": [
            {"parameter": n, "monomial": _mono(m, u.x_names), "weight": tw}
            for n, m, tw in zip(u.t_names, u.upper, u.t_weights)
        ],
        "k": u.k,
        "unfolding": _xpoly(u.F, ctx),
    }


def stage_reduce(ctx: Context) -> dict:
    if ctx.prob.polynomial is None:
        raise InputError("the reduce command needs a 'polynomial' entry")
    try:
        res = reduce_to_T_minus(ctx.prob.polynomial, ctx.u, ctx.prob.truncation)
    except PrincipalPartError as exc:
        raise PreconditionError(f"principal part differs from f0: {exc}") from exc
    return {
        "input": _xpoly(ctx.prob.polynomial, ctx),
        "t": _point(res.t, ctx),
        "normal_form": _xpoly(specialize(ctx.u, res.t), ctx),
        "substitutions": len(res.transcript),
        "degree_reached": res.degree_reached,
    }


def stage_ks(ctx: Context) -> dict:
    M = ctx.M
    return {
        "dual_generators": [_xpoly(n, ctx) for n in M.generators],
        "generator_degrees": list(M.degrees),
        "matrix": [[_tpoly(e, ctx) for e in row] for row in M.entries],
        "symmetric": M.symmetric,
    }


def stage_lie(ctx: Context) -> dict:
    L = ctx.lie
    names = ctx.u.t_names
    return {
        "s": L.s,
        "r": list(L.r),
        "z_sets": [list(z) for z in L.z_sets],
        "filtration_sizes": [len(F) for F in L.filtration],
        "F0": [_mono(m, names) for m in L.filtration[0]] if L.filtration else [],
        "lplus_dimension": len(L.lplus_basis),
        "condition_F": L.condition_F,
        "condition_Z": L.condition_Z,
        "nilpotent": L.nilpotent,
    }


def _family(stratum, ctx: Context) -> dict | None:
    """Normal-form family read off the L_+ normal form of a witness point."""
    u, M = ctx.u, ctx.M
    if not stratum.samples:
        return None
    reps = [lplus_normal_form(t, M, u.w.w_min) for t in stratum.samples]
    rep = max(reps, key=lambda r: sum(1 for c in r if c))
    support = [j for j, c in enumerate(rep) if c]
    if len(support) == 1:
        # the C*-action scales the single surviving parameter to 1
        rep = tuple(Fraction(1) if j == support[0] else Fraction(0) for j in range(u.k))
        family = specialize(u, rep)
    else:
        family = u.F.substitute({u.t_names[j]: 0 for j in range(u.k) if j not in support})
    params = [u.t_names[j] for j in support] if len(support) > 1 else []
    return {"representative": _point(rep, ctx), "family": _xpoly(family, ctx), "parameters": params,
            "constraints": [_tpoly(e, ctx) for e in stratum.equations] if params else [],
            "nonvanishing": [_tpoly(e, ctx) for e in stratum.inequations] if params else []}


def stage_strata(ctx: Context) -> dict:
    S = ctx.strata
    out = []
    for st in S.strata:
        if st.status != "witnessed":
            ctx.undetermined = True
        out.append({
            "ranks": list(st.ranks),
            "hilbert": list(st.hilbert),
            "tau": st.hilbert[-1] if st.hilbert else ctx.u.milnor.mu,
            "status": st.status,
            "equations": [_tpoly(e, ctx) for e in st.equations],
            "inequations": [_tpoly(e, ctx) for e in st.inequations],
            "alternatives": [[_tpoly(a, ctx) for a in alt] for alt in st.alternatives],
            "normal_form": _family(st, ctx),
        })
    return {
        "mu_vector": list(mu_vector(ctx.u)),
        "sigma": [list(r) for r in S.sigma],
        "empty_candidates": [list(r) for r in S.empty_candidates],
        "strata": out,
    }


def _points(ctx: Context) -> list:
    pts = ctx.prob.points
    for p in pts:
        if len(p) != ctx.u.k:
            raise InputError(f"point {p} has {len(p)} coordinates, T_- has dimension {ctx.u.k}")
    return pts


def stage_tau(ctx: Context) -> dict:
    out = []
    for t in _points(ctx):
        tau, hf = tau_at_point(ctx.u, t, ctx.prob.truncation)
        out.append({"t": _point(t, ctx), "tau": tau, "hilbert": list(hf.values), "ranks": list(hf.ranks)})
    return {"mu_vector": list(mu_vector(ctx.u)), "points": out}


def stage_classify(ctx: Context) -> dict:
    pts = _points(ctx)
    out = []
    for t in pts:
        c = classify_point(ctx.u, ctx.M, t, ctx.strata, ctx.invariants)
        out.append({
            "t": _point(c.t, ctx),
            "tau": c.tau,
            "hilbert": list(c.hilbert),
            "ranks": list(c.ranks),
            "stratum_confirmed": c.stratum_confirmed,
            "lplus_normal_form": _point(lplus_normal_form(c.t, ctx.M, ctx.u.w.w_min), ctx),
            "invariant_values": _point(c.invariant_values, ctx),
        })
    pairs = []
    gens = ctx.generators()
    if len(pts) > 1:
        for a, b in itertools.combinations(range(len(pts)), 2):
            r = orbit_equivalent_contact(pts[a], pts[b], gens, ctx.u, ctx.M, ctx.cap())
            if r == UNDETERMINED:
                ctx.undetermined = True
            pairs.append({"pair": [a, b], "contact_equivalent": r if isinstance(r, str) else bool(r)})
    return {"points": out, "equivalence": pairs}


def stage_theta(ctx: Context) -> dict:
    u = ctx.u
    gens = ctx.generators()
    acts = []
    for phi in gens:
        th = theta(phi, u)
        acts.append({"name": phi.name, "images": [_xpoly(p, ctx) for p in phi.images],
                     "action": [_tpoly(c, ctx) for c in th.components]})
    result = {"generators": acts}
    if gens and u.k:
        cl = group_closure([theta(g, u) for g in gens], u.t_names, ctx.cap())
        if not cl.complete:
            ctx.undetermined = True
        result["group_order"] = len(cl.elements) if cl.complete else UNDETERMINED
    return result


def stage_invariants(ctx: Context) -> dict:
    u = ctx.u
    result = {"lplus_invariants": [_tpoly(p, ctx) for p in ctx.invariants] if u.k else []}
    gens = ctx.generators()
    if not gens and ctx.prob.conductor and ctx.prob.conductor > 1:
        gens = enumerate_diagonal(u.f0, u.w, ctx.prob.conductor)
        result["diagonal_group_order"] = len(gens)
    if gens and u.k:
        chars = [diagonal_character(theta(g, u).components) for g in gens]
        if all(c is not None for c in chars):
            bound = ctx.prob.invariant_degree or DEFAULT_INVARIANT_DEGREE
            mons = invariant_monomials(chars, u.k, bound)
            result["group_invariant_monomials"] = {"max_degree": bound,
                                                   "generators": [_mono(m, u.t_names) for m in mons]}
        else:
            result["group_invariant_monomials"] = None
    return result


def stage_analyze(ctx: Context) -> dict:
    out = {"unfold": stage_unfold(ctx)}
    if ctx.u.k == 0:
        return out
    out["ks"] = stage_ks(ctx)
    out["lie"] = stage_lie(ctx)
    out["strata"] = stage_strata(ctx)
    if ctx.prob.points:
        out["classify"] = stage_classify(ctx)
    if ctx.prob.generators:
        out["theta"] = stage_theta(ctx)
    out["invariants"] = stage_invariants(ctx)
    return out


STAGES = {
    "analyze": stage_analyze,
    "unfold": stage_unfold,
    "reduce": stage_reduce,
    "ks": stage_ks,
    "strata": stage_strata,
    "tau": stage_tau,
    "classify": stage_classify,
    "theta": stage_theta,
    "invariants": stage_invariants,
}


# -- text report ----------------------------------------------------------------------------------


def _text(obj, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        if set(obj) == {"variables", "terms", "text"}:
            return [pad + obj["text"]]
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and not _flat(val):
                lines.append(f"{pad}{key}:")
                lines.extend(_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_inline(val)}")
    elif isinstance(obj, list):
        for val in obj:
            sub = _text(val, indent + 1)
            lines.append(pad + "- " + sub[0].strip())
            lines.extend(sub[1:])
    else:
        lines.append(pad + _inline(obj))
    return lines


def _flat(val) -> bool:
    if isinstance(val, dict):
        return set(val) == {"variables", "terms", "text"}
    return all(not isinstance(v, (dict, list)) or _flat(v) for v in val)


def _inline(val) -> str:
    if isinstance(val, dict):
        return val["text"]
    if isinstance(val, list):
        return "[" + ", ".join(_inline(v) for v in val) + "]"
    if val is None:
        return "-"
    return str(val)


def render_text(report: dict) -> str:
    return "\n".join(_text(report)) + "\n"


# -- driver ---------------------------------------------------------------------------------------


def run(command: str, input_path, output_path=None, *, seed=None, truncation=None, conductor=None,
        max_orbit=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        text = Path(input_path).read_text()
        prob = load_problem(text, {"seed": seed, "truncation": truncation, "conductor": conductor,
                                   "max_orbit": max_orbit})
        ctx = Context(prob)
        body = STAGES[command](ctx)
    except (InputError, ParseError, OSError) as exc:
        print(f"error: invalid input: {exc}", file=stderr)
        return EXIT_PARSE
    except (NotQuasihomogeneousInput, PreconditionError, SingularInputError, PrincipalPartError) as exc:
        print(f"error: precondition violated: {exc}", file=stderr)
        return EXIT_PRECONDITION
    except TruncationError as exc:
        print(f"error: standard basis truncation exhausted: {exc} (raise --truncation)", file=stderr)
        return EXIT_TRUNCATION
    except (ArithmeticError, PairingError, AssertionError) as exc:
        print(f"error: internal consistency check failed: {exc}", file=stderr)
        return EXIT_INTERNAL
    report = {
        "format-version": FORMAT_VERSION,
        "command": command,
        "f0": encode_polynomial(prob.f0, prob.w.weights, ctx.conductor),
        "seed": DEFAULT_SEED if prob.seed is None else prob.seed,
        "result": body,
        "undetermined": ctx.undetermined,
    }
    if output_path is None:
        stdout.write(render_text(report))
    else:
        out = Path(output_path)
        out.write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
        out.with_suffix(".txt").write_text(render_text(report))
    return EXIT_UNDETERMINED if ctx.undetermined else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semiquasi", description="Classify semiquasihomogeneous singularities with a fixed principal part.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="problem file (YAML)")
    p.add_argument("--output", help="JSON report path; a .txt report is written next to it")
    p.add_argument("--seed", type=int, help="sampling seed for stratification")
    p.add_argument("--truncation", type=int, help="degree bound for standard bases")
    p.add_argument("--conductor", type=int, help="cyclotomic conductor for roots of unity")
    p.add_argument("--max-orbit", type=int, help="cap on enumerated group elements")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.command, args.input, args.output, seed=args.seed, truncation=args.truncation,
               conductor=args.conductor, max_orbit=args.max_orbit)


if __name__ == "__main__":
    sys.exit(main())
