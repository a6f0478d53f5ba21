"""
Tate 算法：在射影直线的点处对奇异纤维分类，并汇总全局纤维构形

局部计算都在把点平移到 t=0 之后进行，局部参数 π = t；剩余域运算（开平方、
开立方、求逆）只作用在常数项上，坐标变换的平移量写成 π 的幂乘剩余域常数。
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from app.core.errors import SingularFibrationError
from app.schemas.fibre import FibreReport, GlobalReport, KodairaType
from app.services.weierstrass_service import (
    CoordChange,
    WeierstrassModel,
    apply_change,
    b_invariants,
    c_invariants,
    discriminant,
)
from app.utils.field import FiniteField
from app.utils.poly import (
    WEIGHTS,
    Place,
    UniPoly,
    chart_at_infinity,
    rational_roots,
    split_places,
    translate_parameter,
)

# 配置日志记录器
logger = logging.getLogger(__name__)


@dataclass
class LocalResult:
    """局部 Tate 算法的输出"""

    kodaira: KodairaType
    v_delta: int
    reductions: int
    reduction: str
    model: WeierstrassModel


def _val(f: UniPoly) -> int:
    return f.low_valuation()


def _residue(f: UniPoly, k: int = 0):
    """f/π^k 的剩余类（调用方保证可除）"""
    return f.coefficient(k)


def _pi_power(ring, c, k: int) -> UniPoly:
    """c·π^k"""
    return UniPoly.monomial(ring, c, k)


def _local_model(m: WeierstrassModel, place: Place) -> WeierstrassModel:
    """把点移到局部坐标卡的 t=0"""
    if place.is_infinite:
        return m.with_coefficients(chart_at_infinity(m.coefficients))
    lifted = m.lift(place.ring) if m.ring != place.ring else m
    return lifted.with_coefficients([translate_parameter(a, place.value) for a in lifted.coefficients])


def _tate(m: WeierstrassModel) -> LocalResult:
    """
    在 t=0 处运行 Tate 算法

    Args:
        m: 局部模型，局部参数为 t

    Returns:
        LocalResult: Kodaira 型、判别式赋值与极小化次数

    Raises:
        SingularFibrationError: 判别式恒为零
    """
    ring = m.ring
    p = ring.characteristic
    half = None if p == 2 else ring.inv(ring.from_int(2))
    reductions = 0

    def sqrt(c):
        return ring.pth_root(c)

    def result(kodaira: KodairaType, v: int, kind: str) -> LocalResult:
        return LocalResult(kodaira, v, reductions, kind, m)

    while True:
        delta = discriminant(m)
        if delta.is_zero():
            raise SingularFibrationError("判别式恒为零，不是椭圆曲面")
        v_delta = _val(delta)

        # 1. 好约化
        if v_delta == 0:
            return result(KodairaType(family="I", n=0), 0, "good")

        # 2. 乘性约化：c4 是单位
        c4, c6 = c_invariants(m)
        if _val(c4) == 0:
            return result(KodairaType(family="I", n=v_delta), v_delta, "multiplicative")

        # 3. 把奇点移到 (0, 0)
        b2, b4, b6, b8 = b_invariants(m)
        a1, a2, a3, a4, a6 = (_residue(a) for a in m.coefficients)
        if p == 2:
            if _val(b2) > 0:
                r = sqrt(a4)
                t = sqrt(ring.add(ring.mul(ring.add(ring.mul(ring.add(r, a2), r), a4), r), a6))
            else:
                r = ring.div(a3, a1)
                t = ring.div(ring.add(ring.mul(r, r), a4), a1)
        elif p == 3:
            if _val(b2) > 0:
                r = sqrt(ring.neg(_residue(b6)))
            else:
                r = ring.neg(ring.div(_residue(b4), _residue(b2)))
            t = ring.add(ring.mul(a1, r), a3)
        else:
            if _val(c4) > 0:
                r = ring.neg(ring.div(_residue(b2), ring.from_int(12)))
            else:
                num = ring.add(_residue(c6), ring.mul(_residue(b2), _residue(c4)))
                r = ring.neg(ring.div(num, ring.mul(ring.from_int(12), _residue(c4))))
            t = ring.neg(ring.mul(ring.add(ring.mul(a1, r), a3), half))
        m = apply_change(m, CoordChange.translation(ring, r=_pi_power(ring, r, 0), w=_pi_power(ring, t, 0)))
        b2, b4, b6, b8 = b_invariants(m)

        # 4. II / III / IV
        if _val(m.a6) < 2:
            return result(KodairaType(family="II"), v_delta, "additive")
        if _val(b8) < 3:
            return result(KodairaType(family="III"), v_delta, "additive")
        if _val(b6) < 3:
            return result(KodairaType(family="IV"), v_delta, "additive")

        # 5. 使 π | a1, a2；π² | a3, a4；π³ | a6
        if p == 2:
            s = _pi_power(ring, sqrt(_residue(m.a2)), 0)
            t_shift = _pi_power(ring, sqrt(_residue(m.a6, 2)), 1)
        elif p == 3:
            s = m.a1
            t_shift = m.a3
        else:
            s = m.a1.scale(ring.neg(half))
            t_shift = m.a3.scale(ring.neg(half))
        m = apply_change(m, CoordChange.translation(ring, s=s, w=t_shift))

        # 6. 三次式 T³ + bT² + cT + d 的根的情况
        b = _residue(m.a2, 1)
        c = _residue(m.a4, 2)
        d = _residue(m.a6, 3)
        n = ring.from_int
        w = ring.add(
            ring.add(
                ring.sub(ring.mul(n(27), ring.mul(d, d)), ring.mul(ring.mul(b, b), ring.mul(c, c))),
                ring.mul(n(4), ring.mul(ring.pow(b, 3), d)),
            ),
            ring.sub(ring.mul(n(4), ring.pow(c, 3)), ring.mul(n(18), ring.mul(ring.mul(b, c), d))),
        )
        x = ring.sub(ring.mul(n(3), c), ring.mul(b, b))
        if w:
            return result(KodairaType(family="I*", n=0), v_delta, "additive")

        if x:
            # 7. 二重根：I_n*
            if p == 2:
                r = sqrt(c)
            elif p == 3:
                r = ring.div(c, b)
            else:
                r = ring.div(ring.sub(ring.mul(b, c), ring.mul(n(9), d)), ring.mul(n(2), x))
            m = apply_change(m, CoordChange.translation(ring, r=_pi_power(ring, r, 1)))
            ix = iy = 3
            mx = my = 2
            while True:
                a3t = _residue(m.a3, my)
                a6t = _residue(m.a6, mx + my)
                if ring.add(ring.mul(a3t, a3t), ring.mul(n(4), a6t)):
                    break
                t = sqrt(a6t) if p == 2 else ring.neg(ring.mul(a3t, half))
                m = apply_change(m, CoordChange.translation(ring, w=_pi_power(ring, t, my)))
                my += 1
                iy += 1

                a2t = _residue(m.a2, 1)
                a4t = _residue(m.a4, 1 + mx)
                a6t = _residue(m.a6, mx + my)
                if ring.sub(ring.mul(a4t, a4t), ring.mul(n(4), ring.mul(a6t, a2t))):
                    break
                if p == 2:
                    r = sqrt(ring.div(a6t, a2t))
                else:
                    r = ring.neg(ring.div(a4t, ring.mul(n(2), a2t)))
                m = apply_change(m, CoordChange.translation(ring, r=_pi_power(ring, r, mx)))
                mx += 1
                ix += 1
            return result(KodairaType(family="I*", n=ix + iy - 5), v_delta, "additive")

        # 8. 三重根：IV* / III* / II* 或非极小
        if p == 2:
            r = b
        elif p == 3:
            r = sqrt(ring.neg(d))
        else:
            r = ring.neg(ring.div(b, n(3)))
        m = apply_change(m, CoordChange.translation(ring, r=_pi_power(ring, r, 1)))
        a3t = _residue(m.a3, 2)
        a6t = _residue(m.a6, 4)
        if ring.add(ring.mul(a3t, a3t), ring.mul(n(4), a6t)):
            return result(KodairaType(family="IV*"), v_delta, "additive")
        t = sqrt(a6t) if p == 2 else ring.neg(ring.mul(a3t, half))
        m = apply_change(m, CoordChange.translation(ring, w=_pi_power(ring, t, 2)))
        if _val(m.a4) < 4:
            return result(KodairaType(family="III*"), v_delta, "additive")
        if _val(m.a6) < 6:
            return result(KodairaType(family="II*"), v_delta, "additive")

        # 9. 非极小：a_i ↦ a_i / π^i 后重新开始
        m = m.with_coefficients([a.shift(-w) for a, w in zip(m.coefficients, WEIGHTS)])
        reductions += 1
        logger.debug(f"模型在该点非极小，第 {reductions} 次约化")


def _report(label: str, degree: int, local: LocalResult) -> FibreReport:
    kodaira = local.kodaira
    components = kodaira.components
    wild = local.v_delta - components - 1 if kodaira.is_additive else 0
    return FibreReport(
        place=label,
        place_degree=degree,
        kodaira=kodaira,
        v_delta=local.v_delta,
        components=components,
        wild_defect=wild,
        minimality_reductions=local.reductions,
        reduction=local.reduction,
    )


def tate_classify(m: WeierstrassModel, place: Place) -> FibreReport:
    """
    对单个点分类

    Args:
        m: 模型（deg a_i ≤ 2i 时才能查询 ∞）
        place: 有限点或 ∞

    Returns:
        FibreReport: 该点的纤维
    """
    local = _tate(_local_model(m, place))
    return _report(place.label(m.var), place.degree, local)


def reduction_kind(m: WeierstrassModel, place: Place) -> str:
    """good / multiplicative / additive，不做完整分类"""
    local = _local_model(m, place)
    if _val(discriminant(local)) == 0:
        return "good"
    c4, _ = c_invariants(local)
    return "multiplicative" if _val(c4) == 0 else "additive"


def _summarize(m: WeierstrassModel, fibres: List[FibreReport], unsplit: List[str]) -> GlobalReport:
    total = sum(f.v_delta for f in fibres)
    euler = sum(f.euler_number for f in fibres)
    wild = sum(f.wild_defect for f in fibres)
    additive = [f for f in fibres if f.kodaira.is_additive]
    biggest = max(additive, key=lambda f: f.components, default=None)
    ordered = sorted(
        (f for f in fibres if f.v_delta > 0),
        key=lambda f: (f.kodaira.is_additive, f.components, f.kodaira.symbol),
    )
    return GlobalReport(
        characteristic=m.characteristic,
        fibres=fibres,
        total_v_delta=total,
        euler_sum=euler,
        wild_sum=wild,
        euler_ok=not unsplit and euler + wild == 24,
        max_multiplicative=max((f.kodaira.n for f in fibres if f.kodaira.is_multiplicative), default=0),
        max_additive=biggest.kodaira.symbol if biggest else None,
        max_additive_components=biggest.components if biggest else 0,
        configuration=[f.kodaira.symbol for f in ordered],
        complete=not unsplit,
        unsplit=unsplit,
        minimality_reductions=sum(f.minimality_reductions for f in fibres),
    )


def _finite_places(m: WeierstrassModel, delta: UniPoly, search_ext: Optional[int]) -> Tuple[List[FibreReport], List[str]]:
    """有限域上：每个不可约因子只对一个代表点运行 Tate，其余共轭点复制结果"""
    fibres: List[FibreReport] = []
    split = split_places(delta, search_ext)
    for group in split.groups:
        head = group.places[0]
        report = tate_classify(m, head)
        fibres.append(report)
        for conj in group.places[1:]:
            fibres.append(report.model_copy(update={"place": conj.label(m.var)}))
    unsplit = [f"次数 {d} 的不可约因子（重数 {mult}）" for d, mult in split.unsplit]
    return fibres, unsplit


def _rational_places(m: WeierstrassModel, delta: UniPoly) -> Tuple[List[FibreReport], List[str]]:
    """
    特征 0：有理根逐一分类；剩余因子若无重根，其每个根都是 I1
    """
    ring = m.ring
    fibres: List[FibreReport] = []
    rest = delta
    for root in rational_roots(delta):
        fibres.append(tate_classify(m, Place(ring, root)))
        linear = UniPoly(ring, (-root, ring.one))
        while divmod(rest, linear)[1].is_zero():
            rest = divmod(rest, linear)[0]
    unsplit: List[str] = []
    if rest.degree >= 1:
        if rest.gcd(rest.derivative()).degree == 0:
            label = rest.monic().to_literal(m.var)
            for i in range(rest.degree):
                fibres.append(
                    FibreReport(
                        place=f"{label} = 0 的第 {i + 1} 个根",
                        place_degree=rest.degree,
                        kodaira=KodairaType(family="I", n=1),
                        v_delta=1,
                        components=1,
                        reduction="multiplicative",
                    )
                )
        else:
            unsplit.append(f"{rest.to_literal(m.var)}（有重根的无理因子）")
    return fibres, unsplit


def classify_all(m: WeierstrassModel, search_ext: Optional[int] = None) -> GlobalReport:
    """
    对全部奇异纤维分类

    Args:
        m: 满足 deg a_i ≤ 2i 的模型
        search_ext: 分裂判别式时的扩张次数上界

    Returns:
        GlobalReport: 纤维列表（有限点在前，∞ 在后）与汇总

    Raises:
        SingularFibrationError: Δ ≡ 0
        DegreeBoundError: 次数约束不满足
    """
    delta = discriminant(m)
    if delta.is_zero():
        raise SingularFibrationError("判别式恒为零，不是椭圆曲面")

    # 1. 有限点
    if isinstance(m.ring, FiniteField):
        fibres, unsplit = _finite_places(m, delta, search_ext)
    else:
        fibres, unsplit = _rational_places(m, delta)

    # 2. ∞ 点
    infinity = tate_classify(m, Place.infinity(m.ring))
    if infinity.v_delta > 0 or infinity.minimality_reductions > 0:
        fibres.append(infinity)

    report = _summarize(m, fibres, unsplit)
    logger.debug(f"{m.name or '模型'}: {report.summary()}")
    return report


def local_minimal_model(m: WeierstrassModel, place: Place) -> WeierstrassModel:
    """Tate 算法结束时的局部模型（局部参数为 t）"""
    return _tate(_local_model(m, place)).model

