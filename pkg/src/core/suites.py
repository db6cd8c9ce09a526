"""
子命令的检查套件
每个子命令组装一个 VerificationEngine，并收集需要导出的数据表
"""

import logging
import math
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from .. import __version__
from ..kernel.configuration import SpinConfiguration
from ..kernel.coupling import CouplingKernel
from ..kernel.errors import StepBudgetExceededError, StructuralError
from ..kernel.hamiltonian import HamiltonianParams
from ..intervals.interval import IntegerInterval
from ..intervals.scale import ScaleParams
from ..balance.procedure import peierls_map
from ..balance.properties import balancing_property_outcomes
from ..balance.trace_io import write_trace
from ..bounds.approximate import APPROXIMATION_SLACK, approximate_interval, approximation_slack
from ..bounds.calibration import calibrate_c2, calibrate_c_bar_2
from ..bounds.constants import ConstantsStore
from ..bounds.energy import energy_bound_1_check, energy_bound_2_check
from ..bounds.interaction import min_interaction_lower_bound_check, set_interaction_lower_bound_check
from ..bounds.peierls_checks import peierls_lemma_outcomes
from ..bounds.sequences import sequence01_result
from ..bounds.theta import ThetaParams
from ..entropy.counting import entropy_outcomes, family_count_rows
from ..entropy.family import BalancedFamily, enumerate_balanced
from ..contour.contour import contour_outcomes, contour_rows
from ..contour.enumeration import enumerate_contours_at_size
from ..contour.partition import PartitionParams, brute_force_finest_partition, finest_partition
from ..coarse.checks import coarse_outcomes, iso_exhaustive, large_int_check, nesting_check
from ..coarse.grid import CubeGrid
from ..coarse.mixing import AnnealSchedule, cube_mixing_bound_probe, fit_mixing_constant
from ..disorder.checks import (
    GoodEventConstants,
    chain_1d,
    disorder_outcomes,
    event_frequency,
    tail_check,
    tail_outcome,
)
from ..disorder.field import sample_field
from ..disorder.gibbs import ExactGibbs
from ..simulation.experiment import (
    infinite_temperature_check,
    magnetization_experiment,
    stationary_tv_check,
    trend_check,
)
from ..verification import (
    CheckKind,
    CheckOutcome,
    FunctionCheck,
    VerificationEngine,
    VerificationReport,
    aggregate_outcomes,
)
from .config import ExperimentConfig
from .parallel import chunked, make_rng, ordered_map
from .progress_monitor import ProgressMonitor

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    """一次子命令运行的结果"""
    report: VerificationReport
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    # 按 JSON-lines 导出的表
    jsonl_tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)


@dataclass
class SuiteContext:
    """检查之间共享的上下文"""
    config: ExperimentConfig
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    jsonl_tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    store: Optional[ConstantsStore] = None

    @property
    def jobs(self) -> int:
        return self.config.jobs

    def kernel(self) -> CouplingKernel:
        return CouplingKernel(float(self.config.get('model.alpha')), int(self.config.get('model.dimension')))

    def params(self, **changes) -> HamiltonianParams:
        model = self.config.get('model')
        values = {
            'beta': float(model['beta']),
            'epsilon': float(model['epsilon']),
            'cutoff': int(model['cutoff']),
            'pair_convention': model['pair_convention'],
        }
        values.update(changes)
        return HamiltonianParams(**values)

    def scale(self) -> ScaleParams:
        return ScaleParams.from_dict(self.config.get('scale'))


def _check(name: str, func: Callable[..., Any], kind: CheckKind, description: str = "") -> FunctionCheck:
    return FunctionCheck(name, func, kind, description)


# ---- verify-1d ----

def _window_configuration(code: int, half_width: int) -> SpinConfiguration:
    sites = range(-half_width, half_width + 1)
    minus = [x for i, x in enumerate(sites) if (code >> i) & 1]
    return SpinConfiguration.from_minus_sites(minus, -half_width, half_width + 1)


def _balance_chunk(
    codes: List[int],
    half_width: int,
    scale: Dict[str, float],
    alpha: float,
    cutoff: int,
    c2: Optional[float],
) -> Tuple[List[Dict[str, Any]], List[CheckOutcome]]:
    sp = ScaleParams.from_dict(scale)
    k = CouplingKernel(alpha, 1)
    tp = ThetaParams(alpha, sp.delta)
    pure = HamiltonianParams(cutoff=cutoff)
    rows, outcomes = [], []
    for code in codes:
        sigma = _window_configuration(code, half_width)
        try:
            result = peierls_map(sigma, sp)
        except (StepBudgetExceededError, StructuralError) as e:
            outcomes.append(CheckOutcome.hard("balance.termination", CheckKind.PROPERTY, False, f"code={code}: {e}"))
            continue
        outcomes.append(CheckOutcome.hard("balance.termination", CheckKind.PROPERTY, True))
        outcomes.extend(balancing_property_outcomes(result))
        row = {
            'code': code,
            'minus': ' '.join(str(x) for x in sigma.minus_sites()),
            'steps': result.trace.S,
            'I_level': None if result.I_sigma is None else result.I_sigma.level,
            'I_left': None if result.I_sigma is None else result.I_sigma.left,
            'A_size': len(result.A_sigma),
            'energy_ratio': None,
        }
        if sigma.spin(0) == -1:
            outcomes.extend(peierls_lemma_outcomes(result, k, cutoff))
            outcomes.append(CheckOutcome.from_bound(
                "bounds.set_interaction", set_interaction_lower_bound_check(result.A_sigma, k, cutoff)))
            toy = energy_bound_2_check(sigma, result, k, pure)
            row['energy_ratio'] = toy.ratio
            outcomes.append(CheckOutcome.info("bounds.energy_bound_2_toy", CheckKind.BOUND, value=toy.value, bound=toy.bound))
            if c2 is not None:
                outcomes.append(CheckOutcome.from_bound(
                    "bounds.energy_bound_1", energy_bound_1_check(result, k, tp, c2, cutoff)))
        rows.append(row)
    return rows, outcomes


def balance_exhaustive(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """Λ = [-L, L] 上全部构型的平衡过程、Peierls 映射与引理检查"""
    cfg = ctx.config
    half_width = int(cfg.get('window'))
    sp = ctx.scale()
    k = ctx.kernel()
    cutoff = int(cfg.get('model.cutoff'))
    c2 = ctx.store.get('c2', k.alpha, sp.delta, sp.M0) if ctx.store else None
    worker = partial(_balance_chunk, half_width=half_width, scale=sp.to_dict(), alpha=k.alpha, cutoff=cutoff, c2=c2)
    rows, outcomes = [], []
    for chunk_rows, chunk_outcomes in ordered_map(worker, chunked(range(1 << (2 * half_width + 1)), 256), ctx.jobs):
        rows.extend(chunk_rows)
        outcomes.extend(chunk_outcomes)
    ctx.tables['balance_1d'] = rows

    ratios = [r['energy_ratio'] for r in rows if r['energy_ratio'] is not None]
    if ratios and ctx.store is not None:
        ctx.store.put({'name': 'energy_bound_2_toy_ratio', 'alpha': k.alpha, 'delta': sp.delta,
                       'M0': sp.M0, 'value': min(ratios), 'version': __version__})
    if c2 is None:
        outcomes.append(CheckOutcome.info("bounds.energy_bound_1", CheckKind.BOUND, "缺少 c2 标定值"))

    if cfg.get('verify_1d.write_traces'):
        trace_dir = cfg.output_dir / 'traces'
        for code in range(1 << (2 * half_width + 1)):
            sigma = _window_configuration(code, half_width)
            if sigma.spin(0) == -1:
                write_trace(peierls_map(sigma, sp).trace, trace_dir / f"trace_{code}.txt")
    return aggregate_outcomes(outcomes)


def _energy_hard_chunk(codes: List[int], half_width: int, scale: Dict[str, float], alpha: float, cutoff: int) -> List[CheckOutcome]:
    sp = ScaleParams.from_dict(scale)
    k = CouplingKernel(alpha, 1)
    params = HamiltonianParams(cutoff=cutoff)
    outcomes = []
    for code in codes:
        sigma = _window_configuration(code, half_width)
        if sigma.spin(0) != -1:
            continue
        result = peierls_map(sigma, sp)
        outcomes.append(CheckOutcome.from_bound(
            "bounds.energy_bound_2", energy_bound_2_check(sigma, result, k, params), code=code))
    return outcomes


def energy_bound_hard_regime(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """大常数区间 (M0 = 2^10, δ = 0.001) 下 σ_0 = -1 的全部构型满足 ΔH >= J(A_σ, A_σ^c)"""
    cfg = ctx.config
    half_width = int(cfg.get('window'))
    worker = partial(_energy_hard_chunk, half_width=half_width, scale=dict(cfg.get('verify_1d.energy_scale')),
                     alpha=float(cfg.get('model.alpha')), cutoff=int(cfg.get('model.cutoff')))
    outcomes = [o for chunk in ordered_map(worker, chunked(range(1 << (2 * half_width + 1)), 256), ctx.jobs) for o in chunk]
    return aggregate_outcomes(outcomes)


def _interaction_chunk(codes: List[int], length: int, alpha: float) -> List[CheckOutcome]:
    k = CouplingKernel(alpha, 1)
    iv = IntegerInterval(0, length)
    outcomes = []
    for code in codes:
        minus = [x for x in range(length) if (code >> x) & 1]
        sigma = SpinConfiguration.from_minus_sites(minus, 0, length)
        outcomes.append(CheckOutcome.from_bound(
            f"bounds.min_interaction[alpha={alpha}]", min_interaction_lower_bound_check(iv, sigma, k)))
    return outcomes


def interaction_exhaustive(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """J(I^-, I^+) >= c̄1 m^(2-α)：|I| <= 上限的全部构型"""
    cfg = ctx.config
    outcomes = []
    for alpha in cfg.get('verify_1d.interaction_alphas'):
        for length in range(1, int(cfg.get('verify_1d.interaction_max_length')) + 1):
            worker = partial(_interaction_chunk, length=length, alpha=float(alpha))
            for chunk in ordered_map(worker, chunked(range(1 << length), 1024), ctx.jobs):
                outcomes.extend(chunk)
    return aggregate_outcomes(outcomes)


# N = 4, λ = 1.9 时 λ-好序列至少含 3 个 1
SEQUENCE01_REGRESSION = (4, 1.9, 3)


def sequence_exhaustive(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """λ-好序列最少的 1 的个数 >= N^(log_{λ+2} 2)"""
    cfg = ctx.config
    rows, outcomes = [], []
    for lam in cfg.get('verify_1d.sequence_lambdas'):
        for N in range(1, int(cfg.get('verify_1d.sequence_max_n')) + 1):
            result = sequence01_result(N, float(lam))
            rows.append({'N': N, 'lambda': float(lam), 'min_ones': int(result.value), 'bound': result.bound,
                         'pass': result.passed})
            outcomes.append(CheckOutcome.from_bound("bounds.sequence01", result, N=N, lam=float(lam)))
    ctx.tables['sequence01'] = rows
    merged = aggregate_outcomes(outcomes)
    N, lam, expected = SEQUENCE01_REGRESSION
    first, again = sequence01_result(N, lam), sequence01_result(N, lam)
    merged.append(CheckOutcome.hard(
        "bounds.sequence01_regression", CheckKind.IDENTITY,
        first.value == expected and again.value == first.value and first.passed,
        value=first.value, bound=float(expected), details={'N': N, 'lambda': lam},
    ))
    return merged


def approximation_sweep(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """每个区间的近似 ℓ-区间覆盖它且两端距离不超过 0.7|I|"""
    cfg = ctx.config
    lo, hi = cfg.get('verify_1d.approx_left_range')
    failures, worst, examined = [], 0.0, 0
    for length in range(1, int(cfg.get('verify_1d.approx_max_length')) + 1):
        for left in range(int(lo), int(hi) + 1):
            iv = IntegerInterval(left, left + length)
            approx = approximate_interval(iv)
            cover = approx.interval()
            slack = approximation_slack(iv, approx)
            examined += 1
            worst = max(worst, slack)
            if not (cover.start <= iv.start and iv.stop <= cover.stop and slack <= APPROXIMATION_SLACK):
                failures.append([left, length])
    return [CheckOutcome.hard(
        "bounds.approximate_interval", CheckKind.BOUND, not failures,
        f"{len(failures)} 个区间不满足" if failures else "",
        value=worst, bound=APPROXIMATION_SLACK,
        details={'evaluated': examined, 'first_failure': failures[0] if failures else None},
    )]


def entropy_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """宿主区间上完整平衡族的熵检查"""
    cfg = ctx.config
    size = int(cfg.get('verify_1d.entropy_host'))
    n = max(0, int(math.floor(math.log2(size))))
    sp = ctx.scale()
    k = ctx.kernel()
    tp = ThetaParams(k.alpha, sp.delta)
    host = IntegerInterval(0, size)
    family = enumerate_balanced(host, sp, ctx.jobs)
    c_bar_2 = ctx.store.get('c_bar_2', k.alpha, sp.delta, sp.M0) if ctx.store else None
    ctx.tables['entropy_counts'] = family_count_rows(family, range(n + 1))
    return entropy_outcomes(family, n, k, tp, c_bar_2, int(cfg.get('model.cutoff')))


def build_verify_1d() -> VerificationEngine:
    engine = VerificationEngine('verify-1d')
    engine.add_check(_check('balance.exhaustive', balance_exhaustive, CheckKind.PROPERTY, "平衡过程穷举"))
    engine.add_check(_check('bounds.interaction', interaction_exhaustive, CheckKind.BOUND, "相互作用下界穷举"))
    engine.add_check(_check('bounds.sequence01', sequence_exhaustive, CheckKind.BOUND, "λ-好序列穷举"))
    engine.add_check(_check('bounds.approximate', approximation_sweep, CheckKind.BOUND, "近似区间"))
    engine.add_check(_check('bounds.energy_hard', energy_bound_hard_regime, CheckKind.BOUND, "大常数区间能量估计"))
    engine.add_check(_check('entropy', entropy_suite, CheckKind.BOUND, "熵估计"))
    return engine


# ---- verify-2d ----

def random_blob_set(rng: np.random.Generator, size: int, noise: float = 0.05) -> frozenset:
    """
    若干随机矩形的并，再以概率 noise 逐点翻转

    矩形边长在 [size/4, size) 内，粗粒化各层都有可容许立方体。
    """
    mask = np.zeros((size, size), dtype=bool)
    for _ in range(int(rng.integers(1, 4))):
        h, w = (int(v) for v in rng.integers(max(1, size // 4), size, size=2))
        i0 = int(rng.integers(0, size - h + 1))
        j0 = int(rng.integers(0, size - w + 1))
        mask[i0:i0 + h, j0:j0 + w] = True
    mask ^= rng.random((size, size)) < noise
    return frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(mask)))


def partition_agreement(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """合并到不动点的划分与穷举所有划分之交一致"""
    cfg = ctx.config
    rng = make_rng(cfg.seed)
    alpha = float(cfg.get('model.alpha'))
    Ms = cfg.get('verify_2d.partition_Ms')
    max_size = int(cfg.get('verify_2d.partition_max_size'))
    mismatches = []
    total = int(cfg.get('verify_2d.partition_sets'))
    for i in range(total):
        size = int(rng.integers(1, max_size + 1))
        A = {tuple(int(v) for v in rng.integers(0, 8, size=2)) for _ in range(size)}
        pp = PartitionParams.for_alpha(alpha, float(Ms[i % len(Ms)]))
        fast = set(finest_partition(A, pp))
        if fast != set(brute_force_finest_partition(A, pp)):
            mismatches.append(sorted(A))
    return [CheckOutcome.hard(
        "contour.finest_partition", CheckKind.IDENTITY, not mismatches,
        f"{len(mismatches)}/{total} 个集合不一致" if mismatches else "",
        details={'evaluated': total, 'first_failure': mismatches[0] if mismatches else None},
    )]


def contour_sample(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """随机构型上的轮廓划分、擦除与代价检查"""
    cfg = ctx.config
    rng = make_rng(cfg.seed)
    side = int(cfg.get('verify_2d.contour_window'))
    density = float(cfg.get('verify_2d.contour_density'))
    pp = PartitionParams.for_alpha(float(cfg.get('model.alpha')), float(cfg.get('partition.M')))
    k = ctx.kernel()
    params = ctx.params(epsilon=0.0, cutoff=int(cfg.get('verify_2d.contour_cutoff')))
    outcomes, rows = [], []
    for sample in range(int(cfg.get('verify_2d.contour_samples'))):
        sigma = SpinConfiguration(np.where(rng.random((side, side)) < density, -1, 1))
        contours, found = contour_outcomes(sigma, pp, k, params)
        outcomes.extend(found)
        rows.extend(dict(row, sample=sample) for row in contour_rows(contours))
    ctx.jsonl_tables['contours'] = rows
    return aggregate_outcomes(outcomes)


def coarse_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """随机集合上的 No_overlap、Large_int、FFS 与重构检查"""
    cfg = ctx.config
    grid = CubeGrid(int(cfg.get('coarse.r')))
    size = int(cfg.get('window'))
    outcomes, rows = [], []
    for alpha in cfg.get('verify_2d.coarse_alphas'):
        k = CouplingKernel(float(alpha), 2)
        rng = make_rng(cfg.seed)
        for i in range(int(cfg.get('verify_2d.coarse_sets'))):
            A = random_blob_set(rng, size)
            found = coarse_outcomes(A, grid, k)
            for o in found:
                o.name = f"{o.name}[alpha={alpha}]"
            outcomes.extend(found)
            rows.append({'alpha': float(alpha), 'set': i, 'size': len(A),
                         'passed': all(o.passed for o in found)})
    ctx.tables['coarse_sets'] = rows
    return aggregate_outcomes(outcomes)


def large_int_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """ℓ = 1、α = 3 时每个可容许边界对的相互作用不小于 2/27"""
    cfg = ctx.config
    grid = CubeGrid(int(cfg.get('coarse.r')))
    k = CouplingKernel(3.0, 2)
    rng = make_rng(cfg.seed + 1)
    size = int(cfg.get('window'))
    outcomes = []
    for _ in range(int(cfg.get('verify_2d.large_int_sets'))):
        A = random_blob_set(rng, size)
        for _, result in large_int_check(A, 1, grid, k):
            outcomes.append(CheckOutcome.from_bound("coarse.large_int_level1", result))
    if not outcomes:
        return [CheckOutcome.info("coarse.large_int_level1", CheckKind.BOUND, "没有边界对")]
    return aggregate_outcomes(outcomes)


def isoperimetric_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """立方体网格的全部二染色满足等周不等式"""
    cfg = ctx.config
    outcomes, rows = [], []
    for side in cfg.get('verify_2d.iso_sides'):
        for c in cfg.get('verify_2d.iso_cs'):
            examined, failures = iso_exhaustive(int(side), float(c))
            rows.append({'side': int(side), 'c': float(c), 'examined': examined, 'failures': failures})
            outcomes.append(CheckOutcome.hard(
                f"coarse.isoperimetric[side={side},c={c}]", CheckKind.BOUND, failures == 0,
                f"{failures}/{examined} 个划分不成立" if failures else "",
                details={'evaluated': examined, 'failures': failures},
            ))
    ctx.tables['isoperimetric'] = rows
    return outcomes


def nesting_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    return [nesting_check(CubeGrid(int(ctx.config.get('coarse.r'))))]


def build_verify_2d() -> VerificationEngine:
    engine = VerificationEngine('verify-2d')
    engine.add_check(_check('contour.partition', partition_agreement, CheckKind.IDENTITY, "最细划分与穷举一致"))
    engine.add_check(_check('contour.sample', contour_sample, CheckKind.PROPERTY, "随机构型轮廓"))
    engine.add_check(_check('coarse.sets', coarse_suite, CheckKind.BOUND, "粗粒化引理"))
    engine.add_check(_check('coarse.large_int', large_int_suite, CheckKind.BOUND, "ℓ=1 边界对"))
    engine.add_check(_check('coarse.isoperimetric', isoperimetric_suite, CheckKind.BOUND, "等周不等式"))
    engine.add_check(_check('coarse.nesting', nesting_suite, CheckKind.PROPERTY, "立方体嵌套"))
    return engine


# ---- delta-tail ----

def _gibbs_window(ctx: SuiteContext, size: int, **changes) -> ExactGibbs:
    start = -(size // 2)
    return ExactGibbs.interval(start, start + size, ctx.kernel(), ctx.params(**changes))


def tail_grid(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """(ε, λ, |AΔA'|) 网格上的次高斯尾部"""
    cfg = ctx.config
    size = int(cfg.get('window'))
    g = _gibbs_window(ctx, size)
    lo = g.origin[0]
    results = []
    for eps in cfg.get('delta_tail.epsilons'):
        ge = g.with_params(epsilon=float(eps))
        for lam in cfg.get('delta_tail.lambdas'):
            for m in cfg.get('delta_tail.sym_diffs'):
                A = list(range(lo, lo + min(int(m), size)))
                results.append(tail_check(ge, A, [], float(lam), int(cfg.get('delta_tail.samples')),
                                          seed=cfg.seed, jobs=ctx.jobs))
    ctx.tables['tail'] = [r.to_dict() for r in results]
    return [tail_outcome(results)]


def good_event_family(ctx: SuiteContext) -> BalancedFamily:
    """Λ 中央宿主区间上的非空平衡集合族"""
    cfg = ctx.config
    size = min(int(cfg.get('delta_tail.good_event_host')), int(cfg.get('window')))
    start = -(size // 2)
    family = enumerate_balanced(IntegerInterval(start, start + size), ctx.scale(), ctx.jobs)
    return replace(family, members=[A for A in family.members if A], cutoff=int(cfg.get('model.cutoff')))


def good_event_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """平衡集合族上好事件的频率随 ε 的变化"""
    cfg = ctx.config
    g = _gibbs_window(ctx, int(cfg.get('window')))
    family = good_event_family(ctx)
    epsilons = [float(e) for e in cfg.get('delta_tail.good_event_epsilons')]
    seeds = range(cfg.seed, cfg.seed + int(cfg.get('delta_tail.good_event_seeds')))
    constants = GoodEventConstants(fraction=float(cfg.get('delta_tail.good_event_fraction')))
    rows = event_frequency(g, family, epsilons, seeds, constants, ctx.jobs)
    for row in rows:
        row['family_size'] = len(family)
    ctx.tables['good_event'] = rows
    ordered = sorted(rows, key=lambda r: r['epsilon'])
    monotone = all(a['frequency'] >= b['frequency'] for a, b in zip(ordered, ordered[1:]))
    outcomes = [CheckOutcome.info(
        "disorder.good_event_trend", CheckKind.STATISTICAL,
        "频率随 ε 不升" if monotone else "频率随 ε 不单调",
        details={'frequencies': [r['frequency'] for r in ordered], 'family': family.to_dict()},
    )]
    zero = [r for r in rows if r['epsilon'] == 0]
    if zero:
        outcomes.append(CheckOutcome.hard(
            "disorder.good_event_zero_field", CheckKind.PROPERTY, all(r['frequency'] == 1.0 for r in zero),
        ))
    return outcomes


def identity_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """反对称、望远镜求和、翻转权重与截断加倍"""
    cfg = ctx.config
    g = _gibbs_window(ctx, min(int(cfg.get('window')), 8))
    A = [0, 1, 2]
    outcomes = []
    for seed in range(cfg.seed, cfg.seed + 3):
        h = sample_field(g.shape, seed, g.params.epsilon or 1.0, g.origin)
        outcomes.extend(disorder_outcomes(g, h, A, chain_1d(A, 3)))
    return aggregate_outcomes(outcomes)


def build_delta_tail() -> VerificationEngine:
    engine = VerificationEngine('delta-tail')
    engine.add_check(_check('disorder.identities', identity_suite, CheckKind.IDENTITY, "Δ_A 恒等式"))
    engine.add_check(_check('disorder.tail', tail_grid, CheckKind.STATISTICAL, "次高斯尾部"))
    engine.add_check(_check('disorder.good_event', good_event_suite, CheckKind.STATISTICAL, "好事件频率"))
    return engine


# ---- simulate ----

def magnetization_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """(α, β, ε) 网格上的磁化估计、β = 0 检查与趋势检查"""
    cfg = ctx.config
    sim = cfg.section()
    rows = magnetization_experiment(
        sim['alphas'], sim['betas'], sim['epsilons'],
        dimension=int(cfg.get('model.dimension')),
        side=int(cfg.get('window')),
        field_seeds=cfg.get('seeds'),
        chains=int(sim['chains']),
        sweeps=int(cfg.get('sweeps')),
        seed=cfg.seed,
        cutoff=int(cfg.get('model.cutoff')),
        jobs=ctx.jobs,
    )
    ctx.tables['magnetization'] = rows
    outcomes = [infinite_temperature_check(rows)]
    for axis in sim['trend_axes']:
        values = {r[axis] for r in rows}
        if len(values) > 1:
            outcomes.append(trend_check(rows, axis, increasing=(axis == 'epsilon')))
    return outcomes


def stationary_suite(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """小窗口上链的经验分布与精确吉布斯测度"""
    cfg = ctx.config
    sim = cfg.section()
    size = int(sim['stationary_window'])
    if size == 0:
        return [CheckOutcome.info("simulation.stationary_tv", CheckKind.STATISTICAL, "已跳过")]
    dimension = int(cfg.get('model.dimension'))
    if dimension == 1:
        g = _gibbs_window(ctx, size)
    else:
        side = max(1, int(round(math.sqrt(size))))
        g = ExactGibbs((side, side), ctx.kernel(), ctx.params())
    h = sample_field(g.shape, cfg.seed, g.params.epsilon, g.origin) if g.params.epsilon else None
    return [stationary_tv_check(g, h, int(sim['stationary_sweeps']), seed=cfg.seed,
                                tolerance=float(sim['stationary_tolerance']))]


def build_simulate() -> VerificationEngine:
    engine = VerificationEngine('simulate')
    engine.add_check(_check('simulation.magnetization', magnetization_suite, CheckKind.STATISTICAL, "磁化实验"))
    engine.add_check(_check('simulation.stationary', stationary_suite, CheckKind.STATISTICAL, "平稳分布"))
    return engine


# ---- enumerate-contours ----

def contour_enumeration(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """|γ| = n 且包围原点的外部轮廓计数"""
    cfg = ctx.config
    pp = PartitionParams.for_alpha(float(cfg.get('model.alpha')), float(cfg.get('partition.M')))
    rows, shapes = [], []
    for n in cfg.get('enumerate_contours.sizes'):
        result = enumerate_contours_at_size(int(n), pp, ctx.jobs)
        rows.append(result.to_dict())
        shapes.extend(dict(c.to_dict(), n=int(n)) for c in result.shapes)
    ctx.tables['contour_counts'] = rows
    ctx.jsonl_tables['contour_shapes'] = shapes
    positive = [r for r in sorted(rows, key=lambda r: r['n']) if r['count'] > 0]
    monotone = all(a['count'] <= b['count'] for a, b in zip(positive, positive[1:]))
    growth = [r['growth'] for r in positive]
    outcomes = [CheckOutcome.regime(
        "contour.count_trend", CheckKind.PROPERTY, monotone, False,
        "" if monotone else "非零计数随 n 不单调",
        value=max(growth) if growth else None,
        details={'counts': {r['n']: r['count'] for r in rows}},
    )]
    if any(r['n'] == 1 for r in rows):
        single = next(r for r in rows if r['n'] == 1)
        outcomes.append(CheckOutcome.hard("contour.count_n1", CheckKind.IDENTITY, single['count'] == 0,
                                          value=float(single['count']), bound=0.0))
    return outcomes


def build_enumerate_contours() -> VerificationEngine:
    engine = VerificationEngine('enumerate-contours')
    engine.add_check(_check('contour.enumeration', contour_enumeration, CheckKind.PROPERTY, "轮廓计数"))
    return engine


# ---- calibrate ----

def calibrate_constants(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """穷举标定 c̄2 与 c2 并写入常数文件"""
    cfg = ctx.config
    sp = ctx.scale()
    k = ctx.kernel()
    tp = ThetaParams(k.alpha, sp.delta)
    cal = cfg.section()
    results = [
        calibrate_c_bar_2(int(cal['c_bar_2_max_length']), sp, k, tp, ctx.jobs),
        calibrate_c2(int(cal['c2_half_width']), sp, k, tp, int(cfg.get('model.cutoff')), ctx.jobs),
    ]
    outcomes = []
    for result in results:
        name = f"calibration.{result.name}"
        if not result.found:
            outcomes.append(CheckOutcome.info(name, CheckKind.CALIBRATION, "没有可用的构型"))
            continue
        ctx.store.put(dict(result.to_record(), version=__version__))
        outcomes.append(CheckOutcome.hard(
            name, CheckKind.CALIBRATION, result.value > 0, value=float(result.value),
            details={'examined': result.examined, 'argmin': result.argmin},
        ))
    ctx.tables['calibration'] = [r.to_dict() for r in results]
    return outcomes


def mixing_calibration(ctx: SuiteContext, **_) -> List[CheckOutcome]:
    """立方体混合下界的退火探测、拟合与回归下界"""
    cfg = ctx.config
    cal = cfg.section()
    grid = CubeGrid(int(cfg.get('coarse.r')))
    k = CouplingKernel(3.0, 2)
    side = int(cal['mixing_side'])
    schedule = AnnealSchedule(steps=int(cal['mixing_steps']))
    probes = [
        cube_mixing_bound_probe(side, int(m), k, grid, int(cal['mixing_trials']), cfg.seed, schedule, ctx.jobs)
        for m in cal['mixing_ms']
    ]
    fit = fit_mixing_constant(probes)
    ctx.tables['mixing'] = [p.to_dict() for p in probes]
    limit = float(cal['mixing_residual'])
    outcomes = [CheckOutcome.hard(
        "calibration.mixing_fit", CheckKind.CALIBRATION, fit['c'] > 0 and fit['residual'] < limit,
        value=fit['residual'], bound=limit, details=fit,
    )]
    previous = ctx.store.get('b8', 3.0, 0.0, float(side))
    regressed = previous is not None and fit['b8'] < previous * (1.0 - 1e-9)
    if previous is not None:
        outcomes.append(CheckOutcome.hard(
            "calibration.b8_regression", CheckKind.CALIBRATION, not regressed,
            value=fit['b8'], bound=previous,
        ))
    if regressed:
        logger.warning(f"b8 = {fit['b8']:.4g} 低于已记录的下界 {previous:.4g}，保留原值")
        return outcomes
    ctx.store.put({'name': 'b8', 'alpha': 3.0, 'delta': 0.0, 'M0': float(side), 'value': fit['b8'],
                   'version': __version__})
    return outcomes


def build_calibrate() -> VerificationEngine:
    engine = VerificationEngine('calibrate')
    engine.add_check(_check('calibration.constants', calibrate_constants, CheckKind.CALIBRATION, "c̄2 与 c2"))
    engine.add_check(_check('calibration.mixing', mixing_calibration, CheckKind.CALIBRATION, "b8"))
    return engine


SUITES: Dict[str, Callable[[], VerificationEngine]] = {
    'verify-1d': build_verify_1d,
    'verify-2d': build_verify_2d,
    'delta-tail': build_delta_tail,
    'simulate': build_simulate,
    'enumerate-contours': build_enumerate_contours,
    'calibrate': build_calibrate,
}


def run_suite(config: ExperimentConfig, store: Optional[ConstantsStore] = None,
              monitor: Optional[ProgressMonitor] = None) -> SuiteResult:
    """
    运行子命令对应的套件

    Args:
        config: 已校验的配置
        store: 常数存储，verify-1d 读取、calibrate 写入
        monitor: 进度监控器
    """
    ctx = SuiteContext(config, store=store)
    engine = SUITES[config.subcommand]()
    report = engine.run(monitor=monitor, ctx=ctx)
    return SuiteResult(report, ctx.tables, ctx.jsonl_tables)
