"""
Nelder-Mead simplex search with a feasibility projection, an evaluation budget
and restarts from the best vertex.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np


@dataclass
class SimplexResult:
    x: np.ndarray
    score: float
    evaluations: int
    terminated_by: str
    history: List[Tuple[int, np.ndarray, float]] = field(default_factory=list)
    restarts: int = 0


def nelder_mead(
    func: Callable[[np.ndarray], float],
    x_start: np.ndarray,
    step: float = 0.1,
    tol: float = 1e-6,
    max_evaluations: int = 2000,
    restarts: int = 0,
    project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    alpha: float = 1.0,
    gamma: float = 2.0,
    beta: float = 0.5,
    delta: float = 0.5
) -> SimplexResult:
    """
    Minimize `func` by the Nelder-Mead simplex method.

    Every trial point is passed through `project` before evaluation, so the
    simplex never leaves the feasible set. The search stops when the simplex
    diameter falls below `tol` or the evaluation budget is spent. After a
    diameter stop the simplex is rebuilt around the best vertex, at most
    `restarts` times, until a rebuild no longer lowers the score.

    Args:
        func: Objective, may return inf for infeasible points
        x_start: Initial guess
        step: Edge length of the initial simplex
        tol: Diameter tolerance
        max_evaluations: Evaluation budget
        restarts: Maximum number of rebuilds after convergence
        project: Map onto the feasible set (identity when None)
        alpha: Reflection coefficient
        gamma: Expansion coefficient
        beta: Contraction coefficient
        delta: Shrink coefficient

    Returns:
        SimplexResult with the best point, its score, a best-so-far history
        and the number of rebuilds performed
    """
    project = project or (lambda x: x)
    evaluations = 0
    best_score = np.inf
    history: List[Tuple[int, np.ndarray, float]] = []

    def evaluate(x: np.ndarray) -> Tuple[np.ndarray, float]:
        nonlocal evaluations, best_score
        x = project(np.asarray(x, dtype=float))
        score = float(func(x))
        evaluations += 1
        if score < best_score:
            best_score = score
            history.append((evaluations, np.copy(x), score))
        return x, score

    dim = len(x_start)

    def simplex_around(first: List) -> List[List]:
        vertices = [first]
        for i in range(dim):
            x = np.array(first[0], dtype=float)
            x[i] = x[i] + step
            vertices.append(list(evaluate(x)))
        return vertices

    res = simplex_around(list(evaluate(x_start)))
    terminated_by = "budget"
    performed = 0
    converged_score = np.inf
    while evaluations < max_evaluations:
        res.sort(key=lambda item: item[1])
        diameter = max(np.linalg.norm(item[0] - res[0][0]) for item in res[1:]) if dim else 0.0
        if diameter < tol:
            # a rebuild that did not improve on the previous convergence ends the search
            if performed >= restarts or not res[0][1] < converged_score:
                terminated_by = "diameter"
                break
            converged_score = res[0][1]
            performed += 1
            res = simplex_around(res[0])
            continue

        # Centroid
        x0 = np.mean([item[0] for item in res[:-1]], axis=0)
        worst = res[-1]

        # Reflection
        xr, rscore = evaluate(x0 + alpha * (x0 - worst[0]))
        if res[0][1] <= rscore < res[-2][1]:
            res[-1] = [xr, rscore]
            continue

        # Expansion
        if rscore < res[0][1]:
            xe, escore = evaluate(x0 + gamma * (x0 - worst[0]))
            res[-1] = [xe, escore] if escore < rscore else [xr, rscore]
            continue

        # Contraction
        xc, cscore = evaluate(x0 - beta * (x0 - worst[0]))
        if cscore < worst[1]:
            res[-1] = [xc, cscore]
            continue

        # Reduction
        x1 = res[0][0]
        res = [res[0]] + [list(evaluate(x1 + delta * (item[0] - x1))) for item in res[1:]]

    res.sort(key=lambda item: item[1])
    return SimplexResult(res[0][0], res[0][1], evaluations, terminated_by, history, performed)
