"""
Model evaluation on a tensor collocation grid.

Nodes are the Gauss nodes of the nominal laws' gPC bases. Vectorized models
are evaluated in one broadcast call; the others are solved node by node,
optionally in a spawn-context process pool.
"""

import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from riskbound.config import WORKERS, logger
from riskbound.distributions import Distribution, basis_for
from riskbound.errors import NodeEvaluationError, ParameterDomainError, RiskBoundError
from riskbound.models import Model, OutputFunctional
from riskbound.orthopoly import TensorRule, gauss_rule, tensor_rule

MODES = ('output', 'state')


@dataclass(frozen=True, eq=False)
class CollocationGrid:
    """Model values aligned with the rule's r1-major node order."""
    rule: TensorRule
    values: NDArray
    mode: str = 'output'
    output: OutputFunctional | None = None

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float).ravel()
        if values.size != self.rule.size:
            raise ParameterDomainError(f"Grid has {self.rule.size} nodes but {values.size} values")
        bad = ~np.isfinite(values)
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise NodeEvaluationError(f"Non-finite model value {values[k]}", tuple(self.rule.nodes[k]))
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def orders(self) -> tuple[int, int]:
        return self.rule.orders

    def as_matrix(self) -> NDArray:
        """Values as an (n1, n2) matrix, row i1 holding the z1 = nodes1[i1] slice."""
        return self.values.reshape(self.orders)


def collocation_rule(first: Distribution, second: Distribution, orders: tuple[int, int]) -> TensorRule:
    """Tensor Gauss rule of the two laws' gPC bases."""
    return tensor_rule(gauss_rule(basis_for(first), orders[0]), gauss_rule(basis_for(second), orders[1]))


def _evaluate_node(model: Model, mode: str, z1: float, z2: float) -> float:
    value = model.state(z1, z2) if mode == 'state' else model(z1, z2)
    return float(value)


def solve_at_nodes(model: Model, rule: TensorRule, mode: str = 'output', workers: int | None = None) -> CollocationGrid:
    """
    Evaluate the model at every node of the rule.

    Args:
        model: Model to evaluate (F = h(u) in 'output' mode, u in 'state' mode)
        rule: Tensor collocation rule
        mode: 'output' or 'state'
        workers: Process count for non-vectorized models (default config WORKERS; 1 = serial)

    Returns:
        CollocationGrid in rule node order

    Raises:
        NodeEvaluationError: If the model fails or returns a non-finite value at a node
    """
    if mode not in MODES:
        raise ParameterDomainError(f"Unknown collocation mode {mode!r}; expected one of {MODES}")

    workers = WORKERS if workers is None else max(1, int(workers))
    nodes = rule.nodes
    started = time.perf_counter()

    if model.vectorized:
        z1 = rule.first.nodes[:, None]
        z2 = rule.second.nodes[None, :]
        try:
            values = model.state(z1, z2) if mode == 'state' else model(z1, z2)
        except RiskBoundError as e:
            node = (getattr(e, 'z1', np.nan), getattr(e, 'z2', np.nan))
            raise NodeEvaluationError(f"Model evaluation failed: {e}", node)
        values = np.broadcast_to(np.asarray(values, dtype=float), rule.orders).ravel()
    elif workers == 1 or rule.size == 1:
        values = np.empty(rule.size)
        for k, (z1, z2) in enumerate(nodes):
            try:
                values[k] = _evaluate_node(model, mode, z1, z2)
            except RiskBoundError as e:
                raise NodeEvaluationError(f"Model evaluation failed: {e}", (z1, z2))
    else:
        context = multiprocessing.get_context('spawn')
        with ProcessPoolExecutor(max_workers=min(workers, rule.size), mp_context=context) as pool:
            futures = [pool.submit(_evaluate_node, model, mode, float(z1), float(z2)) for z1, z2 in nodes]
            values = np.empty(rule.size)
            for k, future in enumerate(futures):
                try:
                    values[k] = future.result()
                except RiskBoundError as e:
                    for pending in futures[k + 1:]:
                        pending.cancel()
                    raise NodeEvaluationError(f"Model evaluation failed: {e}", tuple(nodes[k]))

    logger.debug(
        f"[Surrogate] {model.kind}: {rule.size} nodes ({mode}) in {time.perf_counter() - started:.3f}s"
        f"{'' if model.vectorized else f', {workers} worker(s)'}"
    )
    output = model.output if mode == 'state' else None
    return CollocationGrid(rule, values, mode, output)
