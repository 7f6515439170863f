"""Multivariate division, Buchberger's algorithm and elimination."""
from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .orders import MonomialOrder, OrderError
from .polynomial import Polynomial, PolynomialError, PolynomialRing, RingMismatchError
from .scalars import RationalField

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    """Raised when a Gröbner computation runs past its time budget.

    ``state`` can be passed back to :func:`buchberger` to resume.
    """

    def __init__(self, message: str, state: "BuchbergerState"):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class Ideal:
    ring: PolynomialRing
    generators: tuple

    def __init__(self, ring: PolynomialRing, generators: Sequence[Polynomial]):
        gens = tuple(generators)
        for g in gens:
            if not isinstance(g, Polynomial) or g.ring != ring:
                raise RingMismatchError("ideal generator does not belong to the ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", gens)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _check_ring(ring, polys):
    for p in polys:
        if p.ring != ring:
            raise RingMismatchError(f"{p.ring} vs {ring}")


def divide(p: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder):
    """Multivariate division: ``p = sum(q_i * d_i) + r``.

    Divisors are tried in sequence order on the current leading term; no term
    of ``r`` is divisible by any divisor's leading monomial.
    """
    ring = p.ring
    _check_ring(ring, divisors)
    if order.ring != ring:
        raise RingMismatchError("order belongs to a different ring")
    key = order.key
    lts = []
    for d in divisors:
        if d.terms:
            lm = order.leading(d.terms)
            lts.append((lm, d.terms[lm], d.terms))
        else:
            lts.append(None)
    work = dict(p.terms)
    heap = [(tuple(-k for k in key(e)), e) for e in work]
    heapq.heapify(heap)
    quotients = [dict() for _ in divisors]
    rem = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = work.pop(e, None)
        if c is None:
            continue
        for i, lt in enumerate(lts):
            if lt is None or not _divides(lt[0], e):
                continue
            lm, lc, terms = lt
            q = c / lc
            shift = _sub_exp(e, lm)
            quotients[i][shift] = quotients[i].get(shift, 0) + q
            for ge, gc in terms.items():
                if ge == lm:
                    continue
                ne = _add_exp(ge, shift)
                v = work.get(ne)
                if v is None:
                    work[ne] = -q * gc
                    heapq.heappush(heap, (tuple(-k for k in key(ne)), ne))
                else:
                    v = v - q * gc
                    if v:
                        work[ne] = v
                    else:
                        del work[ne]
            break
        else:
            rem[e] = c
    qs = [Polynomial(ring, {e: c for e, c in q.items() if c}) for q in quotients]
    return qs, Polynomial(ring, rem)


def _normal_form(terms: dict, basis: list, key, full: bool = True, tick=None) -> dict:
    """Fully reduce ``terms`` by ``basis`` entries ``(lm, lc, terms)``.

    ``tick`` is called every few thousand reduction steps; it may raise to
    abandon a reduction that runs too long.
    """
    work = dict(terms)
    heap = [(tuple(-k for k in key(e)), e) for e in work]
    heapq.heapify(heap)
    rem = {}
    steps = 0
    while heap:
        steps += 1
        if tick is not None and steps % 4096 == 0:
            tick()
        _, e = heapq.heappop(heap)
        c = work.pop(e, None)
        if c is None:
            continue
        for lm, lc, gterms in basis:
            if not _divides(lm, e):
                continue
            q = c / lc
            shift = _sub_exp(e, lm)
            for ge, gc in gterms.items():
                if ge == lm:
                    continue
                ne = _add_exp(ge, shift)
                v = work.get(ne)
                if v is None:
                    work[ne] = -q * gc
                    heapq.heappush(heap, (tuple(-k for k in key(ne)), ne))
                else:
                    v = v - q * gc
                    if v:
                        work[ne] = v
                    else:
                        del work[ne]
            break
        else:
            rem[e] = c
            if not full:
                rem.update(work)
                return rem
    return rem


def _monic_entry(terms: dict, key):
    lm = max(terms, key=key)
    lc = terms[lm]
    if lc != 1:
        inv = 1 / lc
        terms = {e: c * inv for e, c in terms.items()}
    return (lm, terms[lm], terms)


def _spoly(f, g):
    lm_f, _, tf = f
    lm_g, _, tg = g
    l = _lcm(lm_f, lm_g)
    sf, sg = _sub_exp(l, lm_f), _sub_exp(l, lm_g)
    out = {}
    for e, c in tf.items():
        out[_add_exp(e, sf)] = c
    for e, c in tg.items():
        ne = _add_exp(e, sg)
        v = out.get(ne)
        if v is None:
            out[ne] = -c
        else:
            v = v - c
            if v:
                out[ne] = v
            else:
                del out[ne]
    return out


@dataclass
class BuchbergerState:
    """Resumable snapshot of a Buchberger run."""

    basis: list = field(default_factory=list)  # monic entries (lm, lc, terms)
    active: list = field(default_factory=list)  # indices of non-redundant elements
    pairs: list = field(default_factory=list)
    pending: list = field(default_factory=list)  # generators not yet inserted
    pairs_done: int = 0
    elapsed: float = 0.0

    def summary(self) -> dict:
        return {
            "basis_size": len(self.basis),
            "active": len(self.active),
            "pairs_remaining": len(self.pairs),
            "generators_pending": len(self.pending),
            "pairs_done": self.pairs_done,
            "elapsed_seconds": round(self.elapsed, 3),
        }


@dataclass(frozen=True)
class GroebnerBasis:
    ideal: Ideal
    order: MonomialOrder
    elements: tuple

    @property
    def ring(self) -> PolynomialRing:
        return self.ideal.ring

    def reduce(self, p: Polynomial) -> Polynomial:
        return reduce_mod(self, p)

    def contains(self, p: Polynomial) -> bool:
        return not reduce_mod(self, p)

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant() and bool(self.elements[0])

    def leading_monomials(self) -> list:
        return [g.leading_monomial(self.order) for g in self.elements]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def _gm_update(basis, active, pairs, h):
    """Gebauer-Möller installation of element ``h``: product and chain criteria."""
    lm_h = basis[h][0]
    cand = [(h, g) for g in active]
    kept = []
    for idx, (_, g) in enumerate(cand):
        lm_g = basis[g][0]
        l = _lcm(lm_h, lm_g)
        if _coprime(lm_h, lm_g):
            kept.append((h, g))
            continue
        redundant = False
        for _, g2 in cand[idx + 1:]:
            if _divides(_lcm(lm_h, basis[g2][0]), l):
                redundant = True
                break
        if not redundant:
            for _, g2 in kept:
                if _divides(_lcm(lm_h, basis[g2][0]), l):
                    redundant = True
                    break
        if not redundant:
            kept.append((h, g))
    new_pairs = [(h, g) for h, g in kept if not _coprime(lm_h, basis[g][0])]
    out = []
    for i, j in pairs:
        l = _lcm(basis[i][0], basis[j][0])
        if (
            _divides(lm_h, l)
            and _lcm(basis[i][0], lm_h) != l
            and _lcm(lm_h, basis[j][0]) != l
        ):
            continue
        out.append((i, j))
    out.extend(new_pairs)
    new_active = [g for g in active if not _divides(lm_h, basis[g][0])]
    new_active.append(h)
    return new_active, out


def buchberger(
    ideal: Ideal,
    order: MonomialOrder,
    *,
    budget_seconds: float | None = None,
    progress: Callable[[dict], None] | None = None,
    progress_every: int = 200,
    state: BuchbergerState | None = None,
) -> GroebnerBasis:
    """Reduced Gröbner basis of ``ideal`` under ``order``.

    Pairs are processed by the normal strategy (smallest lcm first, ties by
    index).  The result is monic, inter-reduced and sorted descending by
    leading monomial.  With a budget, :class:`BudgetExceeded` carries a state
    from which the run can be resumed.
    """
    ring = ideal.ring
    if order.ring != ring:
        raise RingMismatchError("order belongs to a different ring")
    if not ideal.generators:
        raise PolynomialError("ideal has no generators")
    key = order.key
    start = time.monotonic()
    if state is None:
        state = BuchbergerState()
        gens = [dict(g.terms) for g in ideal.generators if g.terms]
        state.pending = sorted(gens, key=lambda t: key(max(t, key=key)))
    prior = state.elapsed
    deadline = None if budget_seconds is None else start + budget_seconds - prior

    basis, active, pairs = state.basis, state.active, state.pairs

    def checkpoint():
        state.elapsed = prior + time.monotonic() - start
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded(
                f"Gröbner basis computation exceeded {budget_seconds} s", state
            )

    def insert(terms) -> bool:
        nonlocal active, pairs
        reducers = [basis[g] for g in active]
        nf = _normal_form(terms, reducers, key, tick=checkpoint)
        if not nf:
            return False
        basis.append(_monic_entry(nf, key))
        active, pairs = _gm_update(basis, active, pairs, len(basis) - 1)
        state.active, state.pairs = active, pairs
        return True

    while state.pending:
        checkpoint()
        gen = state.pending.pop(0)
        try:
            insert(gen)
        except BudgetExceeded:
            state.pending.insert(0, gen)
            raise
        if any(not any(basis[g][0]) for g in active):
            break

    while pairs:
        if any(not any(basis[g][0]) for g in active):
            pairs.clear()
            break
        checkpoint()
        best = min(range(len(pairs)), key=lambda k: (key(_lcm(basis[pairs[k][0]][0], basis[pairs[k][1]][0])), pairs[k]))
        i, j = pairs.pop(best)
        try:
            insert(_spoly(basis[i], basis[j]))
        except BudgetExceeded:
            # an interrupted reduction leaves the pair for the resumed run
            pairs.append((i, j))
            raise
        state.pairs_done += 1
        if progress is not None and state.pairs_done % progress_every == 0:
            progress(state.summary())

    state.elapsed = prior + time.monotonic() - start
    elements = _interreduce([basis[g] for g in active], key)
    polys = tuple(Polynomial(ring, t) for _, _, t in elements)
    return GroebnerBasis(ideal, order, polys)


def _interreduce(entries: list, key) -> list:
    for lm, one, _ in entries:
        if not any(lm):
            return [(lm, one, {lm: one})]
    entries = sorted(entries, key=lambda en: key(en[0]), reverse=True)
    minimal = [
        en for k, en in enumerate(entries)
        if not any(_divides(o[0], en[0]) for m, o in enumerate(entries) if m != k)
    ]
    out = []
    for k, en in enumerate(minimal):
        others = [o for m, o in enumerate(minimal) if m != k]
        nf = _normal_form(en[2], others, key)
        out.append(_monic_entry(nf, key))
    out.sort(key=lambda en: key(en[0]), reverse=True)
    return out


def reduce_mod(gb: GroebnerBasis, p: Polynomial) -> Polynomial:
    """Normal form of ``p`` modulo a Gröbner basis."""
    if p.ring != gb.ring:
        raise RingMismatchError(f"{p.ring} vs {gb.ring}")
    key = gb.order.key
    basis = [_monic_entry(dict(g.terms), key) for g in gb.elements]
    return Polynomial(p.ring, _normal_form(p.terms, basis, key))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    key = order.key
    return Polynomial(f.ring, _spoly(_monic_entry(dict(f.terms), key), _monic_entry(dict(g.terms), key)))


def is_groebner_basis(elements: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Check that every S-polynomial reduces to zero."""
    key = order.key
    basis = [_monic_entry(dict(g.terms), key) for g in elements if g.terms]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if _normal_form(_spoly(basis[i], basis[j]), basis, key):
                return False
    return True


def is_reduced(elements: Sequence[Polynomial], order: MonomialOrder) -> bool:
    lms = []
    for g in elements:
        lm = order.leading(g.terms)
        if g.terms[lm] != 1:
            return False
        lms.append(lm)
    for k, g in enumerate(elements):
        for m, lm in enumerate(lms):
            if m != k and any(_divides(lm, e) for e in g.terms):
                return False
    return True


def eliminate(ideal: Ideal, order: MonomialOrder, keep: Sequence[str], **kwargs) -> list:
    """Generators of ``ideal ∩ Q[keep]`` as primitive polynomials.

    ``order`` must be an elimination order for the complement of ``keep``.
    Extra keyword arguments go to :func:`buchberger`.
    """
    ring = ideal.ring
    keep = set(keep)
    for v in keep:
        ring.index(v)
    eliminated = [v for v in ring.variables if v not in keep]
    if not order.is_elimination_for(eliminated):
        raise OrderError(f"order does not eliminate {eliminated}")
    gb = buchberger(ideal, order, **kwargs)
    out = []
    for g in gb.elements:
        if g.support_variables() <= keep:
            out.append(g.primitive(order) if isinstance(ring.field, RationalField) else g.monic(order))
    return out


def lift(generators: Sequence[Polynomial], p: Polynomial, order: MonomialOrder):
    """Cofactors ``c`` with ``p = sum(c_i * g_i)``, or ``None`` if ``p`` is not in the ideal."""
    ring = p.ring
    _check_ring(ring, generators)
    k = len(generators)
    zero = ring.zero()
    # each entry: (poly, cofactor list)
    basis = []
    for i, g in enumerate(generators):
        if g.terms:
            cof = [zero] * k
            cof[i] = ring.one()
            basis.append((g, cof))

    def reduce_tracked(f: Polynomial, cof: list):
        f = f
        cof = list(cof)
        rem = ring.zero()
        while f.terms:
            lm = order.leading(f.terms)
            lc = f.terms[lm]
            for g, gcof in basis:
                glm = order.leading(g.terms)
                if _divides(glm, lm):
                    q = lc / g.terms[glm]
                    shift = _sub_exp(lm, glm)
                    f = f - g.mul_term(shift, q)
                    cof = [c + gc.mul_term(shift, -q) for c, gc in zip(cof, gcof)]
                    break
            else:
                rem = rem + ring.monomial(lm, lc)
                f = f - ring.monomial(lm, lc)
        return rem, cof

    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        i, j = pairs.pop(0)
        f, fc = basis[i]
        g, gcf = basis[j]
        lf, lg = order.leading(f.terms), order.leading(g.terms)
        if _coprime(lf, lg):
            continue
        l = _lcm(lf, lg)
        a = ring.monomial(_sub_exp(l, lf), 1 / f.terms[lf])
        b = ring.monomial(_sub_exp(l, lg), 1 / g.terms[lg])
        s = a * f - b * g
        scof = [a * x - b * y for x, y in zip(fc, gcf)]
        r, rc = reduce_tracked(s, [zero] * k)
        if r.terms:
            rc = [x + y for x, y in zip(scof, rc)]
            # r = s - sum(...) tracked: s expressed via scof, reductions via rc
            basis.append((r, rc))
            n = len(basis) - 1
            pairs.extend((n, m) for m in range(n))
    rem, cof = reduce_tracked(p, [zero] * k)
    if rem.terms:
        return None
    return [-c for c in cof]


# ---------------------------------------------------------------------------
# naive oracle: textbook Buchberger with no pair criteria
# ---------------------------------------------------------------------------

def naive_buchberger(ideal: Ideal, order: MonomialOrder) -> tuple:
    """Reduced Gröbner basis by the unrefined algorithm (reference oracle)."""
    ring = ideal.ring

    def lead(f):
        return order.leading(f.terms)

    def reduce_full(f, G):
        r = ring.zero()
        while f.terms:
            lm = lead(f)
            lc = f.terms[lm]
            for g in G:
                glm = lead(g)
                if _divides(glm, lm):
                    f = f - g.mul_term(_sub_exp(lm, glm), lc / g.terms[glm])
                    break
            else:
                r = r + ring.monomial(lm, lc)
                f = f - ring.monomial(lm, lc)
        return r

    G = [g for g in ideal.generators if g.terms]
    changed = True
    while changed:
        changed = False
        for i in range(len(G)):
            for j in range(i + 1, len(G)):
                f, g = G[i], G[j]
                lf, lg = lead(f), lead(g)
                l = _lcm(lf, lg)
                s = f.mul_term(_sub_exp(l, lf), 1 / f.terms[lf]) - g.mul_term(_sub_exp(l, lg), 1 / g.terms[lg])
                r = reduce_full(s, G)
                if r.terms:
                    G.append(r)
                    changed = True
    # minimal, then reduced
    G = [g.monic(order) for g in G]
    minimal = []
    for k, g in enumerate(G):
        lm = lead(g)
        if any(_divides(lead(h), lm) and (lead(h) != lm or m < k) for m, h in enumerate(G) if m != k):
            continue
        minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = [h for m, h in enumerate(minimal) if m != k]
        reduced.append(reduce_full(g, others).monic(order))
    reduced.sort(key=lambda g: order.key(lead(g)), reverse=True)
    return tuple(reduced)
