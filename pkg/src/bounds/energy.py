"""
Peierls 映射的两个能量估计
"""

import logging

from ..kernel.configuration import SpinConfiguration
from ..kernel.coupling import CouplingKernel
from ..kernel.errors import PreconditionError
from ..kernel.hamiltonian import HamiltonianParams, hamiltonian
from ..balance.procedure import PeierlsResult
from ..verification.outcome import BoundResult
from .theta import ThetaParams

logger = logging.getLogger(__name__)


def _require_nonempty(pr: PeierlsResult):
    if not pr.A_sigma or pr.I_sigma is None:
        raise PreconditionError("A_σ 为空")


def energy_bound_1_check(
    pr: PeierlsResult,
    k: CouplingKernel,
    tp: ThetaParams,
    c2: float,
    cutoff: int,
) -> BoundResult:
    """
    J(A_σ, A_σ^c) >= c2 |I_σ|^θ

    Args:
        pr: Peierls 映射结果
        k: 耦合核
        tp: θ 参数
        c2: 标定常数
        cutoff: A_σ^c 的截断半径

    Raises:
        PreconditionError: A_σ 为空
    """
    _require_nonempty(pr)
    value = k.complement_interaction(sorted(pr.A_sigma), cutoff)
    bound = c2 * tp.power(pr.I_sigma.length)
    return BoundResult(value, bound, value >= bound - 1e-12)


def energy_bound_2_check(
    sigma: SpinConfiguration,
    pr: PeierlsResult,
    k: CouplingKernel,
    params: HamiltonianParams,
) -> BoundResult:
    """
    H_0(σ) - H_0(τ_{A_σ} σ) >= J(A_σ, A_σ^c)，无外场

    Returns:
        BoundResult: (能量差, J(A_σ, A_σ^c), 是否成立)

    Raises:
        PreconditionError: A_σ 为空
    """
    _require_nonempty(pr)
    pure = params.without_field()
    A = sorted(pr.A_sigma)
    delta_H = hamiltonian(sigma, pure, k) - hamiltonian(sigma.flip(A), pure, k)
    value = k.complement_interaction(A, pure.cutoff)
    return BoundResult(delta_H, value, delta_H >= value * (1.0 - 1e-9) - 1e-12)
