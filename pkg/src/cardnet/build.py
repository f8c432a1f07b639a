"""Constructors for every comparator/selection network in the package.

All builders are deterministic pure functions: identical parameters produce
identical gate lists and wire numbering, so downstream CNF output is
byte-identical across runs.  Internal helpers operate on (network, wire-list)
pairs; the public functions wrap them in a fresh Network whose inputs are the
wire list and whose outputs are the constructed sequence.

Convention: every sorting/selection result is in non-increasing order, and a
"selection" result is a full-length sequence whose k-prefix holds the k
largest elements sorted; the remaining positions carry leftovers (or constant
padding when a sub-result was replaced by a direct selector).
"""

from __future__ import annotations

from typing import Sequence

from .network import Network
from .seqs import even, odd, zip_cols


def _is_pow2(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


def _sort2(net: Network, a: int, b: int) -> tuple[int, int]:
    hi, lo = net.add_selector((a, b), 2)
    return hi, lo


def _sortm(net: Network, wires: Sequence[int]) -> list[int]:
    """Full sorter gate over up to a handful of wires; identity for length < 2."""
    if len(wires) < 2:
        return list(wires)
    return list(net.add_selector(tuple(wires), len(wires)))


# ---------------------------------------------------------------------------
# direct selectors and splitters
# ---------------------------------------------------------------------------

def direct_selector(n: int, m: int) -> Network:
    """A single m-selector gate of order n."""
    net = Network(n)
    outs = net.add_selector(net.input_wires(), m)
    net.set_outputs(outs)
    return net


def splitter(kind: str, n: int) -> Network:
    """One layer of 2-sorters: plain (i, i+n/2), bitonic (i, n-i+1), or the
    half variant of the plain splitter with its first quarter removed."""
    if n % 2 != 0:
        raise ValueError("splitter needs even n")
    if kind == "half" and n % 4 != 0:
        raise ValueError("half splitter needs n divisible by 4")
    net = Network(n)
    cur = net.input_wires()
    _emit_splitter(net, cur, kind)
    net.set_outputs(cur)
    return net


def _emit_splitter(net: Network, cur: list[int], kind: str) -> None:
    n = len(cur)
    if kind == "plain":
        pairs = [(i, i + n // 2) for i in range(n // 2)]
    elif kind == "bitonic":
        pairs = [(i, n - 1 - i) for i in range(n // 2)]
    elif kind == "half":
        pairs = [(n // 4 + i, 3 * n // 4 + i) for i in range(n // 4)]
    else:
        raise ValueError(f"unknown splitter kind {kind!r}")
    for i, j in pairs:
        cur[i], cur[j] = _sort2(net, cur[i], cur[j])


# ---------------------------------------------------------------------------
# odd-even merging and sorting
# ---------------------------------------------------------------------------

def _emit_oe_merge(net: Network, xs: list[int], ys: list[int]) -> list[int]:
    """Merge two sorted sequences of arbitrary lengths, odd-even style."""
    if not xs:
        return list(ys)
    if not ys:
        return list(xs)
    if len(xs) == 1 and len(ys) == 1:
        return list(_sort2(net, xs[0], ys[0]))
    v = _emit_oe_merge(net, odd(xs), odd(ys))
    w = _emit_oe_merge(net, even(xs), even(ys))
    out = [v[0]]
    npairs = min(len(w), len(v) - 1)
    for j in range(npairs):
        hi, lo = _sort2(net, w[j], v[j + 1])
        out.extend((hi, lo))
    out.extend(v[npairs + 1:])
    out.extend(w[npairs:])
    return out


def _emit_oe_sort(net: Network, wires: Sequence[int]) -> list[int]:
    if len(wires) <= 1:
        return list(wires)
    h = len(wires) // 2
    a = _emit_oe_sort(net, wires[:h])
    b = _emit_oe_sort(net, wires[h:])
    return _emit_oe_merge(net, a, b)


def oe_merge2(n: int) -> Network:
    """Odd-even merger; the two sorted halves are input slots 1..n/2, n/2+1..n."""
    if not _is_pow2(n) or n < 2:
        raise ValueError("odd-even merger needs n a power of 2, n >= 2")
    net = Network(n)
    wires = net.input_wires()
    net.set_outputs(_emit_oe_merge(net, wires[: n // 2], wires[n // 2:]))
    return net


def oe_merge_general(p: int, q: int) -> Network:
    """Odd-even merger of sorted sequences of lengths p and q (any lengths)."""
    net = Network(p + q)
    wires = net.input_wires()
    net.set_outputs(_emit_oe_merge(net, wires[:p], wires[p:]))
    return net


def oe_sort(n: int) -> Network:
    if not _is_pow2(n):
        raise ValueError("odd-even sorter needs n a power of 2")
    net = Network(n)
    net.set_outputs(_emit_oe_sort(net, net.input_wires()))
    return net


# ---------------------------------------------------------------------------
# bitonic merging and block selection
# ---------------------------------------------------------------------------

def _emit_bit_merge(net: Network, wires: Sequence[int]) -> list[int]:
    """Sort a bitonic sequence: split, then recurse on both halves."""
    if len(wires) == 1:
        return list(wires)
    cur = list(wires)
    _emit_splitter(net, cur, "plain")
    h = len(cur) // 2
    return _emit_bit_merge(net, cur[:h]) + _emit_bit_merge(net, cur[h:])


def _emit_half_bit_merge(net: Network, wires: Sequence[int]) -> list[int]:
    """Sort a v-shaped s-dominating sequence; the plain splitter loses its
    first quarter and the base pair needs no comparator at all."""
    if len(wires) <= 2:
        return list(wires)
    cur = list(wires)
    _emit_splitter(net, cur, "half")
    h = len(cur) // 2
    return _emit_half_bit_merge(net, cur[:h]) + _emit_bit_merge(net, cur[h:])


def bitonic_merge(n: int, half: bool = False) -> Network:
    if not _is_pow2(n) or n < 2:
        raise ValueError("bitonic merger needs n a power of 2, n >= 2")
    if half and n % 4 != 0 and n != 2:
        raise ValueError("half-bitonic merger needs n divisible by 4 (or n = 2)")
    net = Network(n)
    emit = _emit_half_bit_merge if half else _emit_bit_merge
    net.set_outputs(emit(net, net.input_wires()))
    return net


def bit_sel(n: int, k: int) -> Network:
    """Block selection: sort k-blocks, then repeatedly bitonic-split pairs of
    blocks, keep the dominating half and re-sort it bitonically."""
    if not (_is_pow2(n) and _is_pow2(k) and 1 <= k <= n):
        raise ValueError("bitonic selection needs n, k powers of 2 with k <= n")
    net = Network(n)
    wires = net.input_wires()
    blocks = [_emit_oe_sort(net, wires[i * k:(i + 1) * k]) for i in range(n // k)]
    residue: list[int] = []
    while len(blocks) > 1:
        nxt = []
        for i in range(0, len(blocks), 2):
            cur = blocks[i] + blocks[i + 1]
            _emit_splitter(net, cur, "bitonic")
            nxt.append(_emit_bit_merge(net, cur[:k]))
            residue.extend(cur[k:])
        blocks = nxt
    net.set_outputs(blocks[0] + residue)
    return net


# ---------------------------------------------------------------------------
# pairwise selection
# ---------------------------------------------------------------------------

def _emit_pw_merge_classic(net: Network, l: list[int], r: list[int], k: int) -> list[int]:
    n = len(l) + len(r)
    if n <= 2 or k == 1:
        return zip_cols(l, r)
    y = _emit_pw_merge_classic(net, odd(l), odd(r), k // 2)
    yp = _emit_pw_merge_classic(net, even(l), even(r), k // 2)
    z = zip_cols(y, yp)
    for i in range(1, k):
        z[2 * i - 1], z[2 * i] = _sort2(net, z[2 * i - 1], z[2 * i])
    return z


def _emit_pw_merge_bitonic(net: Network, l: list[int], r: list[int], k: int,
                           half: bool) -> list[int]:
    # Fold the relevant quarter of each side into a v-shaped s-dominating
    # k-sequence with one bitonic splitter, then sort it.
    cur = l[k // 2: k] + r[: k // 2]
    _emit_splitter(net, cur, "bitonic")
    b = l[: k // 2] + cur[: k // 2]
    residue = cur[k // 2:] + l[k:] + r[k // 2:]
    merged = _emit_half_bit_merge(net, b) if half else _emit_bit_merge(net, b)
    return merged + residue


def pw_merge(n: int, k: int, variant: str = "classic") -> Network:
    """Pairwise merger; the halves are input slots 1..n/2 and n/2+1..n.

    The first half must be top-k sorted, the second top-k/2 sorted, and the
    k/2-prefix of the first must weakly dominate that of the second.
    """
    if not (_is_pow2(n) and _is_pow2(k) and 1 <= k < n and k <= n // 2):
        raise ValueError("pairwise merger needs n, k powers of 2 with k <= n/2")
    net = Network(n)
    wires = net.input_wires()
    l, r = wires[: n // 2], wires[n // 2:]
    if variant == "classic":
        out = _emit_pw_merge_classic(net, l, r, k)
    elif variant in ("bitonic", "half_bitonic"):
        out = _emit_pw_merge_bitonic(net, l, r, k, half=(variant == "half_bitonic"))
    else:
        raise ValueError(f"unknown pairwise merger variant {variant!r}")
    net.set_outputs(out)
    return net


def _emit_pw_sel(net: Network, wires: list[int], k: int, variant: str) -> list[int]:
    n = len(wires)
    if k == n:
        return _emit_oe_sort(net, wires)
    if k == 1:
        if n == 1:
            return wires
        y = net.add_selector(tuple(wires), 1)
        return [y[0]] + [net.const_wire(0)] * (n - 1)
    cur = list(wires)
    _emit_splitter(net, cur, "plain")
    h = n // 2
    l = _emit_pw_sel(net, cur[:h], min(h, k), variant)
    r = _emit_pw_sel(net, cur[h:], min(h, k // 2), variant)
    if variant == "classic":
        return _emit_pw_merge_classic(net, l, r, k)
    return _emit_pw_merge_bitonic(net, l, r, k, half=(variant == "half_bitonic"))


def pw_sel(n: int, k: int, variant: str = "classic") -> Network:
    """Pairwise selection network (classic, bitonic or half-bitonic merger)."""
    if not (_is_pow2(n) and _is_pow2(k) and 1 <= k <= n):
        raise ValueError("pairwise selection needs n, k powers of 2 with k <= n")
    if variant not in ("classic", "bitonic", "half_bitonic"):
        raise ValueError(f"unknown pairwise merger variant {variant!r}")
    net = Network(n)
    net.set_outputs(_emit_pw_sel(net, net.input_wires(), k, variant))
    return net


# ---------------------------------------------------------------------------
# four-wise selection (column split + slope-sorting merger)
# ---------------------------------------------------------------------------

def _check_fourw_profile(lens: Sequence[int], k: int) -> None:
    if len(lens) != 4:
        raise ValueError("four-wise merger takes exactly 4 columns")
    c = lens[0]
    if c < 1:
        raise ValueError("four-wise merger needs a non-empty first column")
    expect = [min(c, k // (i + 1)) for i in range(4)]
    if list(lens) != expect:
        raise ValueError(f"column profile {list(lens)} must be {expect} for k={k}")


def _emit_4w_slope(net: Network, cols: list[list[int]]) -> None:
    """Slope-sorting iterations: halve the stride h and sort the diagonal
    chains until column one-counts can differ by at most one."""
    w, x, y, z = cols
    k1, k2, k3, k4 = (len(c) for c in cols)
    d = (k1 - 1).bit_length()
    h = 1 << d
    while h > 1:
        h //= 2
        for j in range(1, min(k3 - h, k4) + 1):
            if j + 3 * h <= k1 and j + 2 * h <= k2:
                z[j - 1], y[j + h - 1], x[j + 2 * h - 1], w[j + 3 * h - 1] = _sortm(
                    net, (z[j - 1], y[j + h - 1], x[j + 2 * h - 1], w[j + 3 * h - 1]))
            elif j + 2 * h <= k2:
                z[j - 1], y[j + h - 1], x[j + 2 * h - 1] = _sortm(
                    net, (z[j - 1], y[j + h - 1], x[j + 2 * h - 1]))
            else:
                z[j - 1], y[j + h - 1] = _sort2(net, z[j - 1], y[j + h - 1])
        for j in range(1, min(k2 - h, k3, h) + 1):
            if j + 2 * h <= k1:
                y[j - 1], x[j + h - 1], w[j + 2 * h - 1] = _sortm(
                    net, (y[j - 1], x[j + h - 1], w[j + 2 * h - 1]))
            else:
                y[j - 1], x[j + h - 1] = _sort2(net, y[j - 1], x[j + h - 1])
        for j in range(1, min(k1 - h, k2, h) + 1):
            x[j - 1], w[j + h - 1] = _sort2(net, x[j - 1], w[j + h - 1])


def _emit_4w_correction(net: Network, cols: list[list[int]], k: int) -> None:
    """Two correction stages restoring row-major order, plus the boundary
    special cases (including k mod 4 == 3)."""
    w, x, y, z = cols
    k1, k2, k3, k4 = (len(c) for c in cols)
    for j in range(1, min(k1 - 2, k4) + 1):
        z[j - 1], w[j + 1] = _sort2(net, z[j - 1], w[j + 1])
    for j in range(1, min(k2 - 1, k4) + 1):
        y[j - 1], z[j - 1], w[j], x[j] = _sortm(
            net, (y[j - 1], z[j - 1], w[j], x[j]))
    if k1 > k4 and k2 == k4 and k4 >= 1:
        y[k4 - 1], z[k4 - 1], w[k4] = _sortm(net, (y[k4 - 1], z[k4 - 1], w[k4]))
    if k % 4 == 3 and k1 > k3 and k4 < k3 and k4 + 1 < k1:
        y[k4], w[k4 + 1] = _sort2(net, y[k4], w[k4 + 1])


def _emit_4w_merge(net: Network, cols: list[list[int]], k: int) -> list[int]:
    cols = [list(c) for c in cols]
    _emit_4w_slope(net, cols)
    _emit_4w_correction(net, cols, k)
    return zip_cols(*cols)


def fourw_slope(col_lens: Sequence[int]) -> Network:
    """The slope-sorting phase of the four-wise merger, as its own network
    (used by the size analytics; the correction stages are excluded)."""
    net = Network(sum(col_lens))
    wires = net.input_wires()
    cols, at = [], 0
    for ln in col_lens:
        cols.append(wires[at:at + ln])
        at += ln
    _emit_4w_slope(net, cols)
    net.set_outputs(zip_cols(*cols))
    return net


def fourw_merge(col_lens: Sequence[int], k: int) -> Network:
    """Four-wise merger over a four-column tuple with the exact column profile
    (min(c, k/i) for the i-th column); inputs are column-major."""
    _check_fourw_profile(col_lens, k)
    net = Network(sum(col_lens))
    wires = net.input_wires()
    cols, at = [], 0
    for ln in col_lens:
        cols.append(wires[at:at + ln])
        at += ln
    net.set_outputs(_emit_4w_merge(net, cols, k))
    return net


def even_split4(n: int) -> tuple[int, int, int, int]:
    """Near-even four-way split with non-increasing parts and n1 < n for n >= 2."""
    parts = tuple((n + 4 - i) // 4 for i in range(1, 5))
    return parts  # sums to n


def _emit_mw_sel(net: Network, wires: list[int], k: int,
                 col_sizes: Sequence[int], mixer=None) -> list[int]:
    n = len(wires)
    if k == 0 or n <= 1:
        return list(wires)
    if k == 1:
        return list(net.add_selector(tuple(wires), 1))
    sizes = [s for s in col_sizes]
    if len(sizes) != 4 or sum(sizes) != n or any(sizes[i] < sizes[i + 1] for i in range(3)) \
            or sizes[0] >= n or sizes[-1] < 0:
        raise ValueError(f"invalid column profile {sizes} for n={n}")
    cols, at = [], 0
    for s in sizes:
        cols.append(wires[at:at + s])
        at += s
    # sort rows so column one-counts are non-increasing
    for row in range(sizes[0]):
        members = [i for i in range(4) if sizes[i] > row]
        if len(members) >= 2:
            outs = _sortm(net, [cols[i][row] for i in members])
            for i, wire in zip(members, outs):
                cols[i][row] = wire
    sel_cols: list[list[int]] = []
    for i in range(4):
        li = min(sizes[i], k // (i + 1))
        if not cols[i] or li == 0:
            sel_cols.append(list(cols[i]))
        elif mixer is not None and len(cols[i]) >= 2 and mixer.use_direct(len(cols[i]), li):
            outs = list(net.add_selector(tuple(cols[i]), li))
            sel_cols.append(outs + [net.const_wire(0)] * (len(cols[i]) - li))
        else:
            sel_cols.append(_emit_mw_sel(net, cols[i], li, even_split4(len(cols[i])), mixer))
    c = min(sizes[0], k)
    merge_cols, leftovers, pad = [], [], 0
    for i in range(4):
        li = min(sizes[i], k // (i + 1))
        ki = min(c, k // (i + 1))
        merge_cols.append(sel_cols[i][:li] + [net.const_wire(0)] * (ki - li))
        leftovers.extend(sel_cols[i][li:])
        pad += ki - li
    res = _emit_4w_merge(net, merge_cols, k)
    if pad:
        res = res[:len(res) - pad]  # padding only ever holds zeros
    return res + leftovers


def mw_sel(n: int, k: int, col_sizes: Sequence[int]) -> Network:
    """Four-column selection network over the given column profile."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    net = Network(n)
    net.set_outputs(_emit_mw_sel(net, net.input_wires(), k, col_sizes))
    return net


# ---------------------------------------------------------------------------
# four-way odd-even selection
# ---------------------------------------------------------------------------

def _emit_oe4_combine(net: Network, xs: list[int], ys: list[int]) -> list[int]:
    """Fused combine of two sorted sequences (the x side may hold up to four
    more ones than the y side).  Emits one combine-pair gate per output pair."""
    if not ys:
        return list(xs)
    if len(ys) > len(xs):
        raise ValueError("combine expects the first sequence to be the longer one")
    s = len(xs) + len(ys)
    t_wire = net.const_wire(1)
    f_wire = net.const_wire(0)

    def get_x(i: int) -> int:
        return xs[i] if 0 <= i < len(xs) else f_wire

    def get_y(i: int) -> int:
        if i < 0:
            return t_wire
        return ys[i] if i < len(ys) else f_wire

    out: list[int] = []
    for m in range((s + 1) // 2):
        want_x = 2 * m + 1 <= s
        want_y = 2 * m + 2 <= s
        ox, oy = net.add_combine(get_y(m - 2), get_y(m - 1), get_y(m),
                                 get_x(m), get_x(m + 1), get_x(m + 2),
                                 want_x, want_y)
        if ox is not None:
            out.append(ox)
        if oy is not None:
            out.append(oy)
    return out


def oe4_combine(len_x: int, len_y: int, k: int) -> Network:
    """Standalone combine network; inputs are the x sequence then the y one."""
    if len_y > k // 2 or len_x > k // 2 + 2:
        raise ValueError("combine inputs exceed the k/2 (+2) bounds")
    net = Network(len_x + len_y)
    wires = net.input_wires()
    net.set_outputs(_emit_oe4_combine(net, wires[:len_x], wires[len_x:]))
    return net


def _emit_oe4_merge(net: Network, cols: list[list[int]], k: int) -> list[int]:
    cols = [list(c) for c in cols] + [[]] * (4 - len(cols))
    if any(len(cols[i]) < len(cols[i + 1]) for i in range(3)):
        raise ValueError("merger columns must have non-increasing lengths")
    w = cols[0]
    if not cols[1]:
        return list(w)
    s = sum(len(c) for c in cols)
    if len(w) == 1:
        flat = [wire for c in cols for wire in c]
        return list(net.add_selector(tuple(flat), min(k, s)))
    sa = sum((len(c) + 1) // 2 for c in cols)
    sb = sum(len(c) // 2 for c in cols)
    ka = min(sa, k // 2 + 2)
    kb = min(sb, k // 2)
    a = _emit_oe4_merge(net, [odd(c) for c in cols], ka)
    b = _emit_oe4_merge(net, [even(c) for c in cols], kb)
    combined = _emit_oe4_combine(net, a[:ka], b[:kb])
    return combined + a[ka:] + b[kb:]


def oe4_merge(col_lens: Sequence[int], k: int) -> Network:
    """Four-way odd-even merger of up to four sorted columns (column-major input)."""
    lens = [ln for ln in col_lens if ln > 0]
    s = sum(lens)
    if not 1 <= k <= s:
        raise ValueError("need 1 <= k <= total length")
    if lens and k < lens[0]:
        raise ValueError("first column may not be longer than k")
    net = Network(s)
    wires = net.input_wires()
    cols, at = [], 0
    for ln in lens:
        cols.append(wires[at:at + ln])
        at += ln
    net.set_outputs(_emit_oe4_merge(net, cols, k))
    return net


def _oe4_columns(n: int, k: int) -> tuple[int, int, int, int]:
    """Column sizes for the four-way odd-even selection network.

    Small or full-selection instances split evenly; otherwise the three tail
    columns share a power of two near k/4 (clamped below by 1, since the
    expression is fractional for k < 6), falling back to floor(k/4) when that
    power would overshoot n/4.
    """
    if n < 8 or k == n:
        n2, n3, n4 = (n + 2) // 4, (n + 1) // 4, n // 4
    else:
        p = 1
        while 6 * p < k:
            p *= 2
        if p <= n // 4:
            n2 = n3 = n4 = p
        else:
            n2 = n3 = n4 = k // 4
    return n - n2 - n3 - n4, n2, n3, n4


def _emit_oe4_sel(net: Network, wires: list[int], k: int, mixer=None) -> list[int]:
    n = len(wires)
    if k == 0 or n <= 1:
        return list(wires)
    if k == 1:
        return list(net.add_selector(tuple(wires), 1))
    sizes = _oe4_columns(n, k)
    cols, at = [], 0
    for s in sizes:
        cols.append(wires[at:at + s])
        at += s
    ys: list[list[int]] = []
    ks: list[int] = []
    for col in cols:
        ki = min(k, len(col))
        ks.append(ki)
        if not col:
            ys.append([])
        elif mixer is not None and len(col) >= 2 and ki >= 1 \
                and mixer.use_direct(len(col), ki):
            ys.append(list(net.add_selector(tuple(col), ki)))
        else:
            ys.append(_emit_oe4_sel(net, col, ki, mixer))
    res = _emit_oe4_merge(net, [y[:ki] for y, ki in zip(ys, ks)], k)
    leftovers = [wire for y, ki in zip(ys, ks) for wire in y[ki:]]
    return res + leftovers


def oe4_sel(n: int, k: int) -> Network:
    """Four-way odd-even selection network for any 0 <= k <= n."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    net = Network(n)
    net.set_outputs(_emit_oe4_sel(net, net.input_wires(), k))
    return net


# ---------------------------------------------------------------------------
# m-column odd-even selection (m = 2 baseline and m = 4 delegate)
# ---------------------------------------------------------------------------

def _emit_oe2_sel(net: Network, wires: list[int], k: int, mixer=None) -> list[int]:
    n = len(wires)
    if k == 0 or n <= 1:
        return list(wires)
    if k == 1:
        return list(net.add_selector(tuple(wires), 1))
    h = (n + 1) // 2
    halves = [wires[:h], wires[h:]]
    sel: list[list[int]] = []
    ks: list[int] = []
    for part in halves:
        ki = min(k, len(part))
        ks.append(ki)
        if mixer is not None and len(part) >= 2 and ki >= 1 \
                and mixer.use_direct(len(part), ki):
            sel.append(list(net.add_selector(tuple(part), ki)))
        else:
            sel.append(_emit_oe2_sel(net, part, ki, mixer))
    merged = _emit_oe_merge(net, sel[0][:ks[0]], sel[1][:ks[1]])
    return merged + sel[0][ks[0]:] + sel[1][ks[1]:]


def m_oe_sel(n: int, k: int, m: int) -> Network:
    """m-column odd-even selection network; mergers exist for m in {2, 4}.

    m = 2 splits in half and merges with the general odd-even merger; m = 4
    splits evenly at the top and delegates to the four-way machinery.
    """
    if m not in (2, 4):
        raise ValueError("only 2 and 4 columns are supported")
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    net = Network(n)
    wires = net.input_wires()
    if m == 2:
        net.set_outputs(_emit_oe2_sel(net, wires, k))
        return net
    if k == 0 or n <= 1:
        net.set_outputs(wires)
        return net
    if k == 1:
        net.set_outputs(net.add_selector(tuple(wires), 1))
        return net
    sizes = even_split4(n)
    cols, at = [], 0
    for s in sizes:
        cols.append(wires[at:at + s])
        at += s
    ys = [_emit_oe4_sel(net, col, min(k, len(col))) for col in cols]
    ks = [min(k, len(col)) for col in cols]
    res = _emit_oe4_merge(net, [y[:ki] for y, ki in zip(ys, ks)], k)
    leftovers = [wire for y, ki in zip(ys, ks) for wire in y[ki:]]
    net.set_outputs(res + leftovers)
    return net
