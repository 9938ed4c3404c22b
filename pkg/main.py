import sys
from pathlib import Path
from typing import Optional

import fire
import yaml
from loguru import logger

from bkm_weights.cartan import height, parse_matrix, parse_weight
from bkm_weights.config.interface import Config, RunConfig
from bkm_weights.config.log import setting_log
from bkm_weights.config.settings import (
    BUDGET_MB,
    HEISENBERG_CAP,
    LOG_FILE,
    LOG_LEVEL,
    OUTPUT_FORMAT,
    THREADS,
    default_cutoff,
)
from bkm_weights.decorators import report_errors
from bkm_weights.errors import AssertionFailed, InvalidInput


def save_yaml(path: Path, data: dict):
    with open(path, 'w') as f:
        yaml.dump(data, f, sort_keys=False)


def _pop_lambda(weight, extra: dict):
    lam = extra.pop("lambda", None)
    if extra:
        raise InvalidInput(f"unknown flags: {sorted(extra)}")
    return lam if lam is not None else weight


def _setup(matrix, weight, cutoff=None, cap=None, format=None, threads=None, budget_mb=None, oracle_fallback=False):
    if matrix is None:
        raise InvalidInput("--matrix is required")
    run = RunConfig(
        matrix=matrix,
        weight=weight,
        cutoff=cutoff,
        cap=cap or HEISENBERG_CAP or None,
        format=format or OUTPUT_FORMAT,
        threads=threads or THREADS,
        budget_mb=budget_mb or BUDGET_MB,
        oracle_fallback=bool(oracle_fallback),
    )
    A = parse_matrix(matrix)
    lam = parse_weight(weight if weight is not None else "0", A)
    if run.cutoff is None:
        run.cutoff = default_cutoff(A.n)
    return run, A, lam


def _emit(results, command: str, run: Optional[RunConfig] = None, matrix=None):
    from bkm_weights.report import emit_report

    sys.stdout.buffer.write(emit_report(results, command, run, matrix))
    sys.stdout.flush()


def _grade(value, n: int):
    from bkm_weights.helper import load_json_arg

    data = load_json_arg(value) if isinstance(value, str) else value
    if not isinstance(data, (list, tuple)) or len(data) != n:
        raise InvalidInput(f"expected a grade of length {n}, got {value!r}")
    return tuple(int(x) for x in data)


class Cli:
    """
    Batch computations on highest weight modules of BKM algebras.

    Every subcommand takes --matrix (inline JSON or a file) and, where a
    highest weight is needed, --lambda (a list of pairings, or "rho").
    """

    @staticmethod
    @report_errors
    def classify(matrix=None, weight=None, format=None, **kwargs):
        """
        Node types, symmetrizer and, with a weight, its cone memberships.
        """
        weight = _pop_lambda(weight, kwargs)
        run, A, lam = _setup(matrix, weight, format=format)
        result = A.describe()
        if weight is not None:
            result["cone"] = A.cone_membership(lam).to_dict()
        _emit(result, "classify", run, A)

    @staticmethod
    @report_errors
    def weights(matrix=None, weight=None, holes=None, cutoff=None, cap=None, format=None, threads=None, **kwargs):
        """
        Weights of M(λ)/⟨hole vectors⟩ up to the cutoff.

        Args:
            holes: inline JSON or file with {"holes": [...], "cap": k}; defaults
                to the holes of L(λ).
        """
        from bkm_weights.helper import load_json_arg
        from bkm_weights.weights import HoleSet, thmA_enumerate, thmB_weights

        weight = _pop_lambda(weight, kwargs)
        run, A, lam = _setup(matrix, weight, cutoff, cap, format, threads)
        if holes is None:
            hs = HoleSet.for_simple(A, lam, run.cap)
        else:
            data = load_json_arg(holes)
            if isinstance(data, dict) and run.cap is not None and (cap is not None or "cap" not in data):
                data = {**data, "cap": run.cap}
            hs = HoleSet.from_dict(A, lam, data)
        if hs.is_nice():
            theorem, found = "A", thmA_enumerate(hs, run.cutoff, run.threads)
        else:
            theorem, found = "B", thmB_weights(hs, run.cutoff, check=True, threads=run.threads)
        result = {
            "formula": theorem,
            "holes": hs.to_dict(),
            "weights": [list(g) for g in found],
        }
        _emit(result, "weights", run, A)

    @staticmethod
    @report_errors
    def char(
        matrix=None,
        weight=None,
        kind="auto",
        holes=None,
        cutoff=None,
        format=None,
        threads=None,
        budget_mb=None,
        oracle_fallback=False,
        kk_report=False,
        **kwargs,
    ):
        """
        A truncated formal character.

        Args:
            kind: auto | verma | wkb | rank2 | thmD | oracle | denominator.
                auto picks rank2 for rank-2 matrices without real nodes and
                wkb otherwise.
            kk_report: for rank 2, also report the norm-equality set, the
                Kac-Kazhdan linked set and the numerator support.
        """
        from bkm_weights.characters import (
            char_simple_rank2,
            char_thmD,
            char_verma,
            char_wkb,
            denominator_for,
            kk_vs_numerator_report,
            oracle_character,
        )
        from bkm_weights.helper import load_json_arg
        from bkm_weights.lie_engine import build_nilpotent
        from bkm_weights.weights import HoleSet

        weight = _pop_lambda(weight, kwargs)
        run, A, lam = _setup(matrix, weight, cutoff, None, format, threads, budget_mb, oracle_fallback)
        if kind == "auto":
            kind = "rank2" if A.n == 2 and not A.real_nodes else "wkb"
        nil = build_nilpotent(A, run.cutoff, budget_mb=run.budget_mb)
        if kind == "verma":
            character = char_verma(A, lam, run.cutoff, nil, threads=run.threads)
        elif kind == "wkb":
            character = char_wkb(A, lam, run.cutoff, nil, threads=run.threads)
        elif kind == "rank2":
            character = char_simple_rank2(A, lam, run.cutoff, run.oracle_fallback, nil, threads=run.threads)
        elif kind == "thmD":
            hs = HoleSet.for_simple(A, lam) if holes is None else HoleSet.from_dict(A, lam, load_json_arg(holes))
            character = char_thmD(A.n, hs, run.cutoff, threads=run.threads)
        elif kind == "oracle":
            character = oracle_character(A, lam, run.cutoff, nil)
        elif kind == "denominator":
            character = denominator_for(A, run.cutoff, nil)
        else:
            raise InvalidInput(f"unknown character kind {kind!r}")
        if run.format == "table" and not kk_report:
            _emit(character, "char", run, A)
            return
        result = {"character": character.to_dict(), "kind": kind}
        if kk_report:
            result["kk_report"] = kk_vs_numerator_report(A, lam, character, nil)
        _emit(result if run.format == "json" else result["kk_report"], "char", run, A)

    @staticmethod
    @report_errors
    def maxvec(matrix=None, weight=None, grade=None, format=None, budget_mb=None, shapovalov=False, pbw=False, **kwargs):
        """
        Maximal vectors of M(λ) at λ − β: dimension and a basis.

        Args:
            grade: β as a list of simple-root coefficients.
            shapovalov: also compare the Shapovalov determinant's vanishing
                factors with the rank of the form at β.
            pbw: also express the basis in PBW coordinates.
        """
        from bkm_weights.lie_engine import build_verma

        weight = _pop_lambda(weight, kwargs)
        run, A, lam = _setup(matrix, weight, format=format, budget_mb=budget_mb)
        if grade is None:
            raise InvalidInput("--grade is required")
        beta = _grade(grade, A.n)
        run.cutoff = max(1, height(beta))
        verma = build_verma(A, lam, run.cutoff, budget_mb=run.budget_mb)
        found = verma.maximal_vectors(beta)
        result = found.to_dict()
        if pbw:
            result["pbw"] = [
                {str(k): c for k, c in sorted(verma.to_pbw(beta, v).items())} for v in found.basis
            ]
        if shapovalov:
            result["shapovalov"] = verma.shapovalov_det_check(beta).to_dict()
        _emit(result, "maxvec", run, A)

    @staticmethod
    @report_errors
    def solve(matrix=None, weight=None, box=None, pell=False, classify=False, sympy=False, format=None, **kwargs):
        """
        Nonnegative integer solutions of the rank-2 norm equation.

        Args:
            box: a side or [side_x, side_y]; needed for variant R.
            pell: use the shipped variant R instance instead of --matrix.
            classify: report the (2,2) subcase when (2,2) solves.
            sympy: cross-check the solution list with sympy's diophantine solver.
        """
        from bkm_weights.solver import (
            QuadraticInstance,
            classify_22,
            enumerate_solutions_rank2,
            kk_check,
            pell_instance,
            solve_with_sympy,
        )

        weight = _pop_lambda(weight, kwargs)
        if pell:
            inst = pell_instance()
            run, A = RunConfig(format=format or OUTPUT_FORMAT), inst.matrix
        else:
            run, A, lam = _setup(matrix, weight, format=format)
            inst = QuadraticInstance.from_weight(A, lam)
        if isinstance(box, str):
            from bkm_weights.helper import load_json_arg

            box = int(box) if box.strip().isdigit() else load_json_arg(box)
        found = enumerate_solutions_rank2(inst, box)
        result = {"instance": inst.to_dict(), **found.to_dict()}
        if inst.variant == "N":
            result["kk_check"] = kk_check(inst)
        if classify and inst.solves((2, 2)):
            result["classification"] = classify_22(inst).to_dict()
        if sympy and inst.variant == "N":
            other = solve_with_sympy(inst)
            result["sympy_agrees"] = None if other is None else other == found.solutions
        _emit(result, "solve", run, A)

    @staticmethod
    @report_errors
    def dn(n=3, include_zero=False, table=False, format=None):
        """
        Zeros of d^(n), or with --table the solution counts for 1..n.
        """
        from bkm_weights.solver import dn_count_table, enumerate_dn

        run = RunConfig(format=format or OUTPUT_FORMAT)
        n = int(n)
        if table:
            counts = dn_count_table(n)
            result = [{"n": k, **v} for k, v in sorted(counts.items())]
        else:
            result = [s.to_dict() for s in enumerate_dn(n, include_zero=include_zero)]
        _emit(result, "dn", run)

    @staticmethod
    @report_errors
    def kk(matrix=None, weight=None, beta=None, cutoff=None, format=None, budget_mb=None, **kwargs):
        """
        Kac-Kazhdan linkage of β to λ, or with no β every norm-equality grade
        up to the cutoff.
        """
        from bkm_weights.lie_engine import build_nilpotent
        from bkm_weights.solver import chain_residuals, kk_linked, kk_linked_set

        weight = _pop_lambda(weight, kwargs)
        run, A, lam = _setup(matrix, weight, cutoff, format=format, budget_mb=budget_mb)
        if beta is not None:
            grade = _grade(beta, A.n)
            run.cutoff = max(1, height(grade))
            nil = build_nilpotent(A, run.cutoff, budget_mb=run.budget_mb)
            found = kk_linked(A, lam, grade, nil=nil)
            result = {"beta": list(grade), **found.to_dict()}
            if found.witness:
                result["steps_hold"] = all(ok for _, _, ok in chain_residuals(A, lam, found.witness))
        else:
            nil = build_nilpotent(A, run.cutoff, budget_mb=run.budget_mb)
            result = [
                {"beta": list(g), "linked": r.linked, "complete": r.complete}
                for g, r in kk_linked_set(A, lam, run.cutoff, nil).items()
            ]
        _emit(result, "kk", run, A)

    @staticmethod
    @report_errors
    def unique(m1=None, m2=None, max_power=None, format=None):
        """
        Whether X² + Y² + XY − M_1X − M_2Y = 0 has exactly one solution with
        X, Y ≥ 1: one pair with --m1/--m2, or the table up to --max-power.
        """
        from bkm_weights.solver import interior_solutions, unique_solution_predicate, uniqueness_table

        run = RunConfig(format=format or OUTPUT_FORMAT)
        if m1 is not None and m2 is not None:
            interior = interior_solutions(m1, m2)
            result = {
                "M": [int(m1), int(m2)],
                "predicate": unique_solution_predicate(m1, m2),
                "interior_solutions": [list(s) for s in interior],
            }
        elif max_power is not None:
            result = uniqueness_table(int(max_power))
        else:
            raise InvalidInput("pass --m1 and --m2, or --max-power")
        _emit(result, "unique", run)

    @staticmethod
    @report_errors
    def verify(suite="all", format=None):
        """
        Runs a named verification bundle and reports pass/fail per assertion.
        Exits 1 when any assertion fails.
        """
        from bkm_weights.console import print_startup_info
        from bkm_weights.verify import run_suite

        run = RunConfig(format=format or OUTPUT_FORMAT)
        if run.format == "table":
            print_startup_info("verify", suite=suite, threads=run.threads, budget_mb=run.budget_mb)
        checks = run_suite(suite)
        _emit([c.to_dict() for c in checks], f"verify {suite}", run)
        failed = [c.name for c in checks if not c.passed]
        if failed:
            logger.error(f"verify {suite}: {len(failed)} of {len(checks)} assertions failed")
            raise SystemExit(AssertionFailed.exit_code)

    @staticmethod
    def gen_config(dir: str = "."):
        """
        Generates a .env file and a bkm-weights-config.yaml in the specified directory.
        """
        config = Config()
        env_dict = config.convert_to_env(set_env=False)
        dir = Path(dir)

        with open(dir / ".env", "w") as f:
            env_content = "\n".join([f"{key}={value}" for key, value in env_dict.items()])
            f.write(env_content)
        save_yaml(dir / "bkm-weights-config.yaml", config.to_yaml_dict())


def main():
    setting_log(LOG_LEVEL, save_file=LOG_FILE)
    fire.Fire(Cli)


if __name__ == "__main__":
    main()
