"""Independent brute-force oracles used by the tests."""
from fractions import Fraction
from itertools import permutations


def cycle_counts(n):
    """counts[k] = number of permutations of [n] with k cycles, by listing them all."""
    counts = [0] * (n + 1)
    for perm in permutations(range(n)):
        seen, cycles = [False] * n, 0
        for i in range(n):
            if not seen[i]:
                cycles += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
        counts[cycles] += 1
    return counts


def stirling2_table(n):
    """S2[m][k] via S2(m,k) = k S2(m-1,k) + S2(m-1,k-1)."""
    s = [[0] * (n + 2) for _ in range(n + 1)]
    s[0][0] = 1
    for m in range(1, n + 1):
        for k in range(1, m + 1):
            s[m][k] = k * s[m - 1][k] + s[m - 1][k - 1]
    return s


def all_set_partitions(items):
    """Every set partition of ``items`` (list), by inserting the first element."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in all_set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def simulate_tables(bits, choices):
    """Seat customers with a successor map: i goes between pred(C_i) and C_i."""
    n = len(bits)
    nxt = {}
    for i in range(1, n + 1):
        if bits[i - 1]:
            nxt[i] = i
        else:
            c = choices[i - 2]
            pred = next(p for p, q in nxt.items() if q == c)
            nxt[pred] = i
            nxt[i] = c
    seen, blocks = set(), []
    for i in range(1, n + 1):
        if i not in seen:
            block, j = [], i
            while j not in seen:
                seen.add(j)
                block.append(j)
                j = nxt[j]
            blocks.append(sorted(block))
    return sorted(blocks)


def rising(x, m):
    out = Fraction(1)
    for j in range(m):
        out *= x + j
    return out
