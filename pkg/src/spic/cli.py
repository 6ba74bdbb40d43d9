"""Command-line front end: ``spic problem.spic [--json out.json] ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arveson import degree_report, is_homogeneous, phi_kernel_dim
from .checks import CheckContext, cokernel_module, run_checks
from .cycles import (
    Cycle,
    PrimeCandidate,
    Sampling,
    functoriality_check,
    local_cycle,
    cochain_sign,
    pushforward_cycle,
    spectral_picture,
    weyl_test,
)
from .errors import ParseError, SpicError
from .exact import scalar_str
from .fpmodule import DEFAULT_MAX_K, hs_polynomial, local_length, multiplicity_serre, point_status
from .models import MatrixTuple, module_text
from .polyring import Poly
from .problem import Problem, Query, query_text, read_problem

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2

CONVENTION = {
    "indexing": "homological: H_0 is the cokernel, H_n the joint kernel",
    "cycle_sign": "cochain-indexed cycle coefficients are (-1)^n times the reported ones",
    "chi_sign": "cochain-indexed chi' is (-1)^|S| times the reported value",
}


def jsonable(obj):
    """Exact, deterministic JSON form: rationals become 'p/q' strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return scalar_str(obj)
    if isinstance(obj, Cycle):
        return obj.to_json()
    if isinstance(obj, PrimeCandidate):
        return [str(g) for g in obj.generators]
    if isinstance(obj, Poly):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _candidates(problem: Problem) -> list[PrimeCandidate] | None:
    if not problem.candidates:
        return None
    return [
        PrimeCandidate(problem.ring, list(c.generators), "user-trusted" if c.trusted else None,
                       note="declared trusted in the problem file" if c.trusted else "")
        for c in problem.candidates
    ]


class Runner:
    def __init__(self, problem: Problem, sampling: Sampling):
        self.problem = problem
        self.sampling = sampling
        self.model = problem.model()
        self.ring = problem.ring
        self._cands = None
        self._cands_ready = False
        self._picture = None

    @property
    def candidates(self):
        if not self._cands_ready:
            self._cands = _candidates(self.problem)
            self._cands_ready = True
        return self._cands

    def picture(self):
        if self._picture is None:
            self._picture = spectral_picture(self.model, self.candidates, self.sampling)
        return self._picture

    def names(self, frame) -> list[str]:
        return [self.ring.names[i] for i in frame]

    # -- queries ------------------------------------------------------------
    def run(self, q: Query) -> tuple[dict, str | None]:
        return getattr(self, "q_" + q.name)(q)

    def q_spectrum(self, q):
        model = self.model
        if isinstance(model, MatrixTuple):
            dims = model.root_space_dims()
            return {"points": [{"point": p, "root_space_dim": dims[p]} for p in model.taylor_spectrum()]}, None
        support = model.support_ideal()
        return {"support_ideal": support.reduced_gens(), "dimension": support.dimension()}, None

    def q_fiber(self, q):
        fh = self.model.fiber_homology(q.point)
        return {"dims": list(fh.dims), "index": fh.index, "in_spectrum": self.model.in_spectrum(q.point)}, None

    def q_stalk(self, q):
        out = []
        for j, h in enumerate(self.model.stalk_homology(q.point)):
            entry = {"degree": j, "zero": h.is_zero()}
            if not h.is_zero():
                entry.update(module_text(h))
                isolated = point_status(h.annihilator(), q.point) == "isolated"
                entry["length_at_point"] = local_length(h, q.point) if isolated else None
            out.append(entry)
        return {"homology": out}, None

    def q_cycle(self, q):
        c = local_cycle(self.model, q.point, self.candidates, self.sampling,
                        None if not self.model.in_spectrum(q.point) else self.picture())
        return {"cycle": c, "cochain_convention": c.scaled(cochain_sign(self.ring.n)), "off_spectrum": c.off_spectrum}, None

    def q_picture(self, q):
        pic = self.picture()
        comps = []
        for c in pic.components:
            comps.append({
                "prime_generators": c.prime.generators,
                "kind": c.prime.kind,
                "dimension": c.dimension,
                "index": c.index,
                "samples": [{"point": s.point, "frame": self.names(s.frame), "chi": s.chi, "e": s.e}
                            for s in c.samples],
            })
        return {"components": comps, "all_weyl": pic.all_weyl()}, None

    def q_weyl(self, q):
        if not self.model.in_spectrum(q.point):
            return {"in_spectrum": False, "is_weyl": None, "witnesses": []}, None
        res = weyl_test(self.model, q.point, picture=self.picture())
        return {
            "in_spectrum": True,
            "is_weyl": res.is_weyl,
            "witnesses": [{"prime_generators": p.generators, "index": l} for p, l in res.witnesses],
        }, None

    def q_hs(self, q):
        module = cokernel_module(self.model)
        rec = hs_polynomial(module, list(q.polys), point=q.at, max_k=self.sampling.max_k)
        return {
            "values": [v for _, v in rec.samples],
            "coefficients": rec.coefficients,
            "degree": rec.degree,
            "e": rec.multiplicity,
            "window": list(rec.stability_window),
        }, None

    def q_mult(self, q):
        module = cokernel_module(self.model)
        r = len(q.polys)
        rec = hs_polynomial(module, list(q.polys), point=q.at, max_k=self.sampling.max_k)
        out = {"hs": rec.multiplicity_at(r)}
        if q.at is None:
            out["serre"] = multiplicity_serre(module, list(q.polys))
            out["agree"] = out["serre"] == out["hs"]
            return out, "pass" if out["agree"] else "fail"
        return out, None

    def q_pushforward(self, q):
        images = list(q.polys)
        pushed = self.model.pushforward(images)
        out = {"model": pushed.describe()}
        if not isinstance(self.model, MatrixTuple):
            out["cycle"] = pushforward_cycle(self.picture().cycle().max_part(), images, self.sampling, pushed.ring)
        verdict = None
        if q.target is not None:
            rep = functoriality_check(self.model, images, q.target, self.candidates, self.sampling)
            out["functoriality"] = {"target_point": rep.mu, "preimages": rep.preimages, "lhs": rep.lhs,
                                    "rhs": rep.rhs, "equal": rep.equal}
            verdict = "pass" if rep.equal else "fail"
        return out, verdict

    def q_chi(self, q):
        chi = self.model.chi_prime(q.point, q.frame)
        return {"chi": chi, "cochain_convention": cochain_sign(len(q.frame)) * chi}, None

    def q_arveson(self, q):
        module = cokernel_module(self.model)
        if module.is_zero() or not is_homogeneous(module):
            return {"graded": False}, None
        window = min(10, self.sampling.max_k)
        rep = degree_report(module, self.sampling.max_k)
        return {
            "graded": True,
            "kernel_dims": [phi_kernel_dim(module, k) for k in range(window + 1)],
            **rep.as_dict(),
        }, None

    def q_verify(self, q):
        ctx = CheckContext(point=q.point, frame=q.frame, images=list(q.polys) if q.polys else None,
                           target_point=q.target, candidates=self.candidates, sampling=self.sampling)
        if q.point is None and q.frame is None and q.polys is None and q.target is None:
            ctx._picture = self._picture
        results = run_checks(self.model, list(q.checks), ctx)
        if self._picture is None and ctx._picture is not None and q.point is None:
            self._picture = ctx._picture
        failed = any(r.verdict == "fail" for r in results)
        return {"checks": [{"name": r.name, "verdict": r.verdict, "details": r.details} for r in results]}, (
            "fail" if failed else "pass")


def _inputs(q: Query, ring) -> dict:
    out = {}
    if q.point is not None:
        out["point"] = q.point
    if q.frame is not None:
        out["frame"] = [ring.names[i] for i in q.frame]
    if q.polys is not None:
        out["map" if q.name in ("pushforward", "verify") else "ideal"] = q.polys
    if q.checks is not None:
        out["checks"] = list(q.checks)
    if q.at is not None:
        out["at"] = q.at
    if q.target is not None:
        out["target"] = q.target
    return out


def run_problem(problem: Problem, sampling: Sampling | None = None, verify_only: bool = False) -> tuple[dict, int]:
    """Execute the queries in file order; returns (report, exit code)."""
    sampling = sampling or Sampling.from_env()
    runner = Runner(problem, sampling)
    report = {"model": runner.model.describe(), "convention": CONVENTION, "queries": []}
    code = EXIT_OK
    for q in _executed(problem, verify_only):
        entry = {"name": q.name, "inputs": _inputs(q, problem.ring)}
        try:
            result, verdict = runner.run(q)
            entry["result"] = result
            if verdict is not None:
                entry["verdict"] = verdict
                if verdict == "fail" and code == EXIT_OK:
                    code = EXIT_VERIFY
        except SpicError as exc:
            entry["error"] = {"type": type(exc).__name__, "message": str(exc)}
            code = EXIT_INPUT
        report["queries"].append(entry)
    return jsonable(report), code


def emit_json(report: dict) -> bytes:
    return (json.dumps(report, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _executed(problem: Problem, verify_only: bool) -> list[Query]:
    return [q for q in problem.queries if not verify_only or q.name == "verify"]


def _human(report: dict, problem: Problem, verify_only: bool = False) -> str:
    lines = [f"model: {report['model']['kind']} over {', '.join(report['model']['ring'])}"]
    lines.append(f"convention: {CONVENTION['indexing']}; {CONVENTION['cycle_sign']}")
    for q, entry in zip(_executed(problem, verify_only), report["queries"]):
        head = query_text(q, problem.ring)
        tag = f"  [{entry['verdict'].upper()}]" if "verdict" in entry else ""
        lines.append("")
        lines.append(f"> {head}{tag}")
        if "error" in entry:
            lines.append(f"  error {entry['error']['type']}: {entry['error']['message']}")
            continue
        for key, value in entry["result"].items():
            lines.append(f"  {key}: {_short(key, value)}")
    return "\n".join(lines) + "\n"


def _short(key, value) -> str:
    if key in ("cycle", "cochain_convention") and isinstance(value, list):
        if not value:
            return "0"
        return " + ".join(f"{t['coefficient']}*({', '.join(t['prime_generators']) or '0'})" for t in value)
    return json.dumps(value, ensure_ascii=False)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="spic", description="Spectral cycles of commuting tuples from problem files.")
    parser.add_argument("file", help="problem file")
    parser.add_argument("--json", metavar="OUT", help="write the machine report to OUT ('-' for stdout)")
    parser.add_argument("--verify-only", action="store_true", help="run only the verify queries")
    parser.add_argument("--sample-budget", type=int, default=None, metavar="N",
                        help="generic-sample search budget per component")
    parser.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, metavar="N",
                        help="largest k used when fitting Hilbert-Samuel polynomials")
    args = parser.parse_args(argv)

    try:
        problem = read_problem(args.file)
    except ParseError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"{args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except SpicError as exc:
        print(f"{args.file}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    base = Sampling.from_env(max_k=args.max_k)
    sampling = Sampling(args.sample_budget or base.budget, base.seed, args.max_k)
    try:
        report, code = run_problem(problem, sampling, args.verify_only)
    except SpicError as exc:
        print(f"{args.file}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.json == "-":
        sys.stdout.buffer.write(emit_json(report))
    else:
        sys.stdout.write(_human(report, problem, args.verify_only))
        if args.json:
            with open(args.json, "wb") as fh:
                fh.write(emit_json(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
