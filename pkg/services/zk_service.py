"""
The diagonal group generated by ±I, Z and multi-controlled Z, as GF(2) monomial sets.

Multiplication is symmetric difference of monomials (every element is its own
inverse). Conjugating by X_i turns each monomial S containing i into the pair
{S, S minus i}; when S = {i} the pair is {S} and a sign flip.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from constants.sim_constants import MAX_DENSE_ZK_QUBITS
from models.gate import Gate
from models.ledger import ClassicalOpCounter
from models.pauli_string import PauliString
from models.zk_element import Monomial, ZkElement
from services.errors import UsageError


def _count(counter: Optional[ClassicalOpCounter], amount: int) -> None:
    if counter is not None and amount:
        counter.add(amount)


def _check_subset(s: Iterable[int], n: int) -> List[int]:
    qubits = sorted(set(int(q) for q in s))
    if qubits and (qubits[0] < 0 or qubits[-1] >= n):
        raise UsageError(f"Subset {qubits} is outside [0, {n}).")
    return qubits


def zk_multiply(
    a: ZkElement,
    b: ZkElement,
    counter: Optional[ClassicalOpCounter] = None,
) -> ZkElement:
    if a.n != b.n:
        raise UsageError(f"Element widths differ: {a.n} vs {b.n}.")
    monomials = set(a.monomials)
    for monomial in b.monomials:
        monomials ^= {monomial}
    _count(counter, len(b.monomials))
    return ZkElement(n=a.n, sign=a.sign * b.sign, monomials=frozenset(monomials), k=max(a.k, b.k))


def zk_level(g: ZkElement) -> int:
    return g.level


def _conjugate_single(g: ZkElement, qubit: int, counter: Optional[ClassicalOpCounter]) -> ZkElement:
    """X_q g X_q."""
    monomials = set(g.monomials)
    sign = g.sign
    toggles = 0
    for monomial in g.monomials:
        if qubit not in monomial:
            continue
        reduced: Monomial = tuple(q for q in monomial if q != qubit)
        if reduced:
            monomials ^= {reduced}
            toggles += 1
        else:
            sign = -sign
    _count(counter, toggles)
    return ZkElement(n=g.n, sign=sign, monomials=frozenset(monomials), k=g.k)


def zk_conjugate_by_x(
    g: ZkElement,
    s: Iterable[int],
    counter: Optional[ClassicalOpCounter] = None,
) -> ZkElement:
    """G' = X_s G X_s G†, built one X_i at a time; level drops by at least one."""
    qubits = _check_subset(s, g.n)
    conjugated = g
    for qubit in qubits:
        conjugated = _conjugate_single(conjugated, qubit, counter)
    difference = zk_multiply(conjugated, g, counter)
    return ZkElement(n=g.n, sign=difference.sign, monomials=difference.monomials, k=max(g.k - 1, 0))


def zk_commute_x_left(g: ZkElement, s: Iterable[int]) -> Tuple[PauliString, ZkElement, ZkElement]:
    """(X_s, G', G) with G X_s = X_s G' G."""
    qubits = _check_subset(s, g.n)
    return PauliString.x_on(g.n, qubits), zk_conjugate_by_x(g, qubits), g


def zk_derivative(
    g: ZkElement,
    path: Sequence[int],
    counter: Optional[ClassicalOpCounter] = None,
) -> ZkElement:
    """Repeated single-qubit G' along `path`: path (i, j) gives X_j C X_j C† with C = X_i G X_i G†."""
    element = g
    for qubit in path:
        element = zk_conjugate_by_x(element, [qubit], counter)
    return element


def zk_to_circuit(g: ZkElement) -> Tuple[List[Gate], int]:
    """One MCZ per monomial in canonical order, plus the global sign."""
    return [Gate(name="MCZ", qubits=monomial) for monomial in g.sorted_monomials], g.sign


def zk_to_matrix(g: ZkElement) -> np.ndarray:
    """Diagonal of g as a ±1 vector of length 2^n."""
    if g.n > MAX_DENSE_ZK_QUBITS:
        raise UsageError(f"Dense diagonal limited to {MAX_DENSE_ZK_QUBITS} qubits, got {g.n}.")
    indices = np.arange(2 ** g.n)
    diagonal = np.full(indices.size, float(g.sign))
    for monomial in g.monomials:
        all_one = np.ones(indices.size, dtype=bool)
        for qubit in monomial:
            all_one &= ((indices >> (g.n - 1 - qubit)) & 1).astype(bool)
        diagonal[all_one] *= -1.0
    return diagonal


def candidate_monomials(n: int, k: int) -> List[Monomial]:
    return [monomial for size in range(1, k + 1) for monomial in combinations(range(n), size)]


def random_zk(n: int, k: int, rng: np.random.Generator) -> ZkElement:
    """Each monomial of size <= k kept with probability 1/2; uniform sign."""
    if not 1 <= k <= n:
        raise UsageError(f"random_zk needs 1 <= k <= n, got n={n}, k={k}.")
    sign = 1 if rng.integers(2) == 0 else -1
    candidates = candidate_monomials(n, k)
    keep = rng.integers(2, size=len(candidates))
    monomials = frozenset(m for m, bit in zip(candidates, keep) if bit)
    return ZkElement(n=n, sign=sign, monomials=monomials, k=k)


def enumerate_zk(n: int, k: int) -> Iterator[ZkElement]:
    """Every element of the group at (n, k); 2^(1 + Σ_{j=1..k} C(n, j)) of them."""
    candidates = candidate_monomials(n, k)
    for sign in (1, -1):
        for bits in product((0, 1), repeat=len(candidates)):
            monomials = frozenset(m for m, bit in zip(candidates, bits) if bit)
            yield ZkElement(n=n, sign=sign, monomials=monomials, k=k)
