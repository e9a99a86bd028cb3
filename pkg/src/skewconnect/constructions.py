"""Functorial constructions on linear systems.

Every construction acts per direction: difference directions transform
the system matrix A, differential directions the derivation matrix G.
Basis orders are fixed so results are exact matrix identities:
row-major for Kronecker products, lexicographic k-subsets for exterior
powers and lexicographic weakly-increasing index tuples for symmetric
powers.
"""

from itertools import combinations, combinations_with_replacement

from .connection import Action, ActionType, LinearSystem
from .errors import BadDegree, BaseMismatch, NotDifferenceDirection
from .exactalg import Matrix


def _check_base(s1, s2):
    if s1.base != s2.base:
        raise BaseMismatch("systems live over different bases")


def _paired_actions(s1, s2):
    if set(s1.actions) != set(s2.actions):
        raise BaseMismatch("systems act in different directions")
    return sorted(s1.actions)


def direct_sum(s1: LinearSystem, s2: LinearSystem) -> LinearSystem:
    """Block-diagonal sum."""
    _check_base(s1, s2)
    t = s1.base.tower
    out = {}
    for i in _paired_actions(s1, s2):
        a1, a2 = s1.actions[i], s2.actions[i]
        if a1.type != a2.type:
            raise BaseMismatch("mixed action types in one direction")
        n1, n2 = s1.rank, s2.rank
        zero = t.zero()
        rows = []
        for r in range(n1):
            rows.append(list(a1.matrix.data[r]) + [zero] * n2)
        for r in range(n2):
            rows.append([zero] * n1 + list(a2.matrix.data[r]))
        out[i] = Action(a1.type, Matrix(t, rows))
    return LinearSystem(s1.base, s1.rank + s2.rank, out)


def tensor(s1: LinearSystem, s2: LinearSystem) -> LinearSystem:
    """Tensor product: A_1 (x) A_2, resp. G_1 (x) I + I (x) G_2."""
    _check_base(s1, s2)
    t = s1.base.tower
    out = {}
    for i in _paired_actions(s1, s2):
        a1, a2 = s1.actions[i], s2.actions[i]
        if a1.type != a2.type:
            raise BaseMismatch("mixed action types in one direction")
        if a1.type is ActionType.DIFFERENCE:
            out[i] = Action(ActionType.DIFFERENCE, a1.matrix.kron(a2.matrix))
        else:
            i1 = Matrix.identity(t, s1.rank)
            i2 = Matrix.identity(t, s2.rank)
            out[i] = Action(ActionType.DIFFERENTIAL, a1.matrix.kron(i2) + i1.kron(a2.matrix))
    return LinearSystem(s1.base, s1.rank * s2.rank, out)


def dual(s: LinearSystem) -> LinearSystem:
    """Dual system: A -> transpose(A)^-1, G -> -transpose(G).

    For horizontal Z of the dual and horizontal Y of s the pairing
    transpose(Z) Y is constant in every direction.
    """
    out = {}
    for i, action in s.actions.items():
        if action.type is ActionType.DIFFERENCE:
            out[i] = Action(ActionType.DIFFERENCE, s.volte(i).transpose())
        else:
            out[i] = Action(ActionType.DIFFERENTIAL, -action.matrix.transpose())
    return LinearSystem(s.base, s.rank, out)


def internal_hom(s1: LinearSystem, s2: LinearSystem) -> LinearSystem:
    """Maps-from-s1-to-s2 system on row-major flattened mu2 x mu1 matrices.

    Difference directions act by F -> A_2 F A_1^-1 (flattened matrix
    A_2 (x) transpose(A_1)^-1); differential directions by
    F -> G_2 F - F G_1.  Equal, entry for entry, to tensor(s2, dual(s1)),
    which is asserted.
    """
    _check_base(s1, s2)
    t = s1.base.tower
    out = {}
    for i in _paired_actions(s1, s2):
        a1, a2 = s1.actions[i], s2.actions[i]
        if a1.type != a2.type:
            raise BaseMismatch("mixed action types in one direction")
        if a1.type is ActionType.DIFFERENCE:
            out[i] = Action(ActionType.DIFFERENCE, a2.matrix.kron(s1.volte(i).transpose()))
        else:
            i1 = Matrix.identity(t, s1.rank)
            i2 = Matrix.identity(t, s2.rank)
            out[i] = Action(
                ActionType.DIFFERENTIAL,
                a2.matrix.kron(i1) - i2.kron(a1.matrix.transpose()),
            )
    hom = LinearSystem(s1.base, s1.rank * s2.rank, out)
    assert hom == tensor(s2, dual(s1)), "hom flattening disagrees with tensor-with-dual"
    return hom


def _subsets(n, k):
    return list(combinations(range(n), k))


def _induced_difference(A, subsets):
    """Compound matrix of k-minors (Cauchy-Binet action on wedges)."""
    t = A.tower
    rows = []
    for S in subsets:
        row = []
        for T in subsets:
            minor = Matrix(t, [[A.data[r][c] for c in T] for r in S])
            row.append(minor.det())
        rows.append(row)
    return Matrix(t, rows)


def _sign_of_sort(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                seq[i], seq[j] = seq[j], seq[i]
                sign = -sign
    return sign


def _induced_derivation_ext(G, subsets):
    """Row-replacement extension of a derivation to wedge coordinates."""
    t = G.tower
    index = {S: n for n, S in enumerate(subsets)}
    size = len(subsets)
    zero = t.zero()
    out = [[zero] * size for _ in range(size)]
    for S in subsets:
        r = index[S]
        for pos, s_el in enumerate(S):
            for tcol in range(G.rows):
                g = G.data[s_el][tcol]
                if t.is_zero(g):
                    continue
                if tcol in S and tcol != s_el:
                    continue
                replaced = list(S)
                replaced[pos] = tcol
                sign = _sign_of_sort(replaced)
                T = tuple(sorted(replaced))
                c = index[T]
                term = g if sign > 0 else -g
                out[r][c] = out[r][c] + term
    return Matrix(t, out)


def ext_power(s: LinearSystem, k: int) -> LinearSystem:
    """Exterior power on the lexicographic basis of k-subsets."""
    if not 1 <= k <= s.rank:
        raise BadDegree(f"exterior power degree {k} outside 1..{s.rank}")
    subsets = _subsets(s.rank, k)
    out = {}
    for i, action in s.actions.items():
        if action.type is ActionType.DIFFERENCE:
            out[i] = Action(ActionType.DIFFERENCE, _induced_difference(action.matrix, subsets))
        else:
            out[i] = Action(ActionType.DIFFERENTIAL, _induced_derivation_ext(action.matrix, subsets))
    return LinearSystem(s.base, len(subsets), out)


def _multisets(n, k):
    return list(combinations_with_replacement(range(n), k))


def _induced_difference_sym(A, multisets):
    """Matrix of the induced action on degree-k symmetric coordinates."""
    t = A.tower
    index = {m: n for n, m in enumerate(multisets)}
    size = len(multisets)
    zero = t.zero()
    out = [[zero] * size for _ in range(size)]
    for U in multisets:
        r = index[U]
        # expand prod_{u in U} (sum_c A[u][c] e_c) by iterated convolution
        acc = {(): t.one()}
        for u in U:
            nxt = {}
            for mono, coeff in acc.items():
                for c in range(A.rows):
                    a = A.data[u][c]
                    if t.is_zero(a):
                        continue
                    m2 = tuple(sorted(mono + (c,)))
                    term = coeff * a
                    if m2 in nxt:
                        nxt[m2] = nxt[m2] + term
                    else:
                        nxt[m2] = term
            acc = nxt
        for mono, coeff in acc.items():
            out[r][index[mono]] = out[r][index[mono]] + coeff
    return Matrix(t, out)


def _induced_derivation_sym(G, multisets):
    t = G.tower
    index = {m: n for n, m in enumerate(multisets)}
    size = len(multisets)
    zero = t.zero()
    out = [[zero] * size for _ in range(size)]
    for U in multisets:
        r = index[U]
        for pos in range(len(U)):
            for c in range(G.rows):
                g = G.data[U[pos]][c]
                if t.is_zero(g):
                    continue
                replaced = list(U)
                replaced[pos] = c
                V = tuple(sorted(replaced))
                col = index[V]
                out[r][col] = out[r][col] + g
    return Matrix(t, out)


def sym_power(s: LinearSystem, k: int) -> LinearSystem:
    """Symmetric power on the lexicographic basis of weakly increasing tuples."""
    if k < 1:
        raise BadDegree("symmetric power degree must be >= 1")
    multisets = _multisets(s.rank, k)
    out = {}
    for i, action in s.actions.items():
        if action.type is ActionType.DIFFERENCE:
            out[i] = Action(ActionType.DIFFERENCE, _induced_difference_sym(action.matrix, multisets))
        else:
            out[i] = Action(ActionType.DIFFERENTIAL, _induced_derivation_sym(action.matrix, multisets))
    return LinearSystem(s.base, len(multisets), out)


def casorati_rate(s: LinearSystem, key=None):
    """det A_i: the first-order rate of the top exterior power.

    For a companion system of sigma^mu y + a_(mu-1) sigma^(mu-1) y + ... +
    a_0 y = 0 this equals (-1)^mu a_0, which is asserted when the system
    remembers its scalar coefficients.
    """
    if key is None:
        diffs = [i for i in s.directions() if s.actions[i].type is ActionType.DIFFERENCE]
        if len(diffs) != 1:
            raise NotDifferenceDirection("specify the difference direction")
        key = diffs[0]
    i = s.base.direction_index(key)
    if s.actions[i].type is not ActionType.DIFFERENCE:
        raise NotDifferenceDirection(f"direction {key!r} carries no difference action")
    rate = s.actions[i].matrix.det()
    if s.companion_of is not None:
        a0 = s.companion_of[0]
        expected = a0 if s.rank % 2 == 0 else -a0
        assert rate == expected, "companion determinant disagrees with (-1)^mu a_0"
    return rate
