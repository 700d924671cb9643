"""Document-level operations shared by the CLI and the MCP tools."""

import math
import time
from enum import Enum

import numpy as np
from loguru import logger

from .classifier import classify, necessary_checks
from .documents import FlowDocument, GReportDocument, MatrixDocument, ScheduleDocument, VerdictDocument
from .embedder import HyperbolaOptions, Verdict, decide
from .exceptions import DocumentError, IllConditioned
from .inhom import GVerdict, evolve, g_embed_d3, liouville_det, peano_baker
from .linalg import Tolerances, is_markov, mat_exp, principal_log
from .models import (
    EqualInputParams,
    K3STParams,
    TNParams,
    embed_equal_input,
    embed_k3st,
    embed_tn,
    equal_input_matrix,
    k3st_matrix,
    tn_matrix,
)


class ModelKind(str, Enum):
    EQUAL_INPUT = "equal-input"
    TN = "tn"
    K3ST = "k3st"
    JC = "jc"
    K2P = "k2p"


EXIT_OK = 0
EXIT_NOT_EMBEDDABLE = 1
EXIT_UNDECIDED = 2
EXIT_INPUT_ERROR = 64

_EXIT_CODES = {
    Verdict.EMBEDDABLE.value: EXIT_OK,
    Verdict.NOT_EMBEDDABLE.value: EXIT_NOT_EMBEDDABLE,
    Verdict.UNDECIDED.value: EXIT_UNDECIDED,
    GVerdict.G_EMBEDDABLE.value: EXIT_OK,
    GVerdict.NOT_G_EMBEDDABLE.value: EXIT_NOT_EMBEDDABLE,
    GVerdict.UNDECIDED.value: EXIT_UNDECIDED,
}


def exit_code(verdict: str | None) -> int:
    """Shell exit code for a verdict; documents without one count as success."""
    return _EXIT_CODES.get(verdict, EXIT_OK) if verdict else EXIT_OK


def _markov(doc: MatrixDocument, tol: Tolerances) -> np.ndarray:
    M = doc.to_mat()
    if not is_markov(M, tol):
        raise DocumentError("rows do not form a Markov matrix (nonnegative, unit row sums)")
    return M


def classify_document(doc: MatrixDocument, tol: Tolerances) -> VerdictDocument:
    """Case tag and necessary-condition report, without a verdict."""
    tol = doc.effective_tolerances(tol)
    M = _markov(doc, tol)
    try:
        case = classify(M, tol)
    except IllConditioned as e:
        logger.warning("Classification ill-conditioned", error=str(e))
        case = None
    return VerdictDocument.from_case(doc, case, necessary_checks(M, tol))


def embed_document(
    doc: MatrixDocument,
    tol: Tolerances,
    *,
    all_branches: bool = True,
    options: HyperbolaOptions | None = None,
    timing: bool = False,
) -> VerdictDocument:
    tol = doc.effective_tolerances(tol)
    M = _markov(doc, tol)
    started = time.perf_counter()
    result = decide(M, tol, all_branches=all_branches, options=options)
    elapsed = (time.perf_counter() - started) * 1e3 if timing else None
    return VerdictDocument.from_result(doc, result, elapsed_ms=elapsed)


def exp_document(doc: MatrixDocument) -> MatrixDocument:
    return MatrixDocument.from_mat(mat_exp(doc.to_mat()), label=doc.label)


def log_document(doc: MatrixDocument, tol: Tolerances) -> MatrixDocument:
    """Principal logarithm.

    Raises:
        SpectrumOnCut: No real principal logarithm exists.
        IllConditioned: The logarithm fails its residual check.
    """
    tol = doc.effective_tolerances(tol)
    return MatrixDocument.from_mat(principal_log(doc.to_mat(), tol), label=doc.label)


def model_document(kind: ModelKind, params: dict[str, float], tol: Tolerances) -> VerdictDocument:
    """Build a model matrix from its parameters and decide it.

    Parameter names per kind:
        equal-input: c1..c4 (two to four weights)
        tn: a1..a4, kappa1, kappa2
        k3st: x, y, z
        jc: c (constant input, 4 states)
        k2p: transition, transversion

    Raises:
        DocumentError: Missing or unknown parameters.
        InfeasibleParams: The parameters do not describe a Markov matrix.
    """
    if kind is ModelKind.EQUAL_INPUT:
        names = sorted(k for k in params if k.startswith("c") and k[1:].isdigit())
        if set(params) - set(names) or not names:
            raise DocumentError("equal-input takes weights c1..c4")
        p = EqualInputParams(c_vec=tuple(params[k] for k in names))
        p.check()
        M, result = equal_input_matrix(p), embed_equal_input(p, tol)
    elif kind is ModelKind.JC:
        if set(params) != {"c"}:
            raise DocumentError("jc takes exactly one parameter c")
        p = EqualInputParams.constant(params["c"], dim=4)
        p.check()
        M, result = equal_input_matrix(p), embed_equal_input(p, tol)
    elif kind is ModelKind.TN:
        tn = TNParams(**params)
        tn.check()
        M, result = tn_matrix(tn), embed_tn(tn, tol)
    else:
        if kind is ModelKind.K2P:
            if set(params) != {"transition", "transversion"}:
                raise DocumentError("k2p takes transition and transversion")
            k3 = K3STParams.k2p(params["transition"], params["transversion"])
        else:
            k3 = K3STParams(**params)
        k3.check()
        M, result = k3st_matrix(k3), embed_k3st(k3, tol)

    logger.debug("Model decided", kind=kind.value, verdict=result.verdict.value)
    source = MatrixDocument.from_mat(M, label=kind.value)
    model: dict[str, float | str] = {"kind": kind.value, **params}
    return VerdictDocument.from_result(source, result, model=model)


def gcheck_document(doc: MatrixDocument, tol: Tolerances) -> GReportDocument:
    tol = doc.effective_tolerances(tol)
    M = _markov(doc, tol)
    return GReportDocument.from_report(doc, g_embed_d3(M, tol))


def simulate_document(
    doc: ScheduleDocument,
    tol: Tolerances,
    *,
    t: float | None = None,
    method: str = "pbs",
    det_check: bool = False,
    max_terms: int = 200,
    pbs_tol: float = 1e-12,
) -> FlowDocument:
    """Transition matrix of a schedule at time t (default: its full span).

    Raises:
        ValueError: Invalid schedule or t outside the schedule.
        NotConverged: The Peano-Baker series hit its term limit.
    """
    schedule = doc.to_schedule(tol)
    t = schedule.span if t is None else t
    if method == "pbs":
        P = peano_baker(schedule, t, max_terms=max_terms, tol=pbs_tol)
    else:
        P = evolve(schedule.truncated(t))
    det = float(np.linalg.det(P))

    liouville = check = None
    if det_check:
        liouville = liouville_det(schedule, t)
        check = math.isclose(det, liouville, rel_tol=tol.residual, abs_tol=tol.residual) and (
            0.0 < det <= 1.0 + tol.residual
        )
    logger.debug("Schedule simulated", method=method, t=t, det=det)
    return FlowDocument(
        result=MatrixDocument.from_mat(P),
        method=method,
        t=t,
        det=det,
        liouville_det=liouville,
        det_check=check,
    )
