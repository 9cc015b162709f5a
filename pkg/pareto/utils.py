def dominates(a, b):
    """True if objectives ``a`` are no worse than ``b`` everywhere and better somewhere."""
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def non_dominated(points):
    """Sort-and-scan front over (aoa1, coma).

    Returns ascending aoa1 / descending coma. On a tie in both objectives the
    lexicographically smallest decision vector is kept.
    """
    ordered = sorted(points, key=lambda p: (p.aoa1, p.coma, p.decision))
    front = []
    best_coma = float("inf")
    for point in ordered:
        if point.coma < best_coma:
            front.append(point)
            best_coma = point.coma
    return front


def brute_force_front(points):
    """O(n^2) reference for :func:`non_dominated`."""
    points = list(points)
    survivors = [
        p
        for p in points
        if not any(dominates(q.objectives, p.objectives) for q in points if q is not p)
    ]
    unique = {}
    for p in sorted(survivors, key=lambda p: p.decision):
        unique.setdefault(p.objectives, p)
    return sorted(unique.values(), key=lambda p: (p.aoa1, p.coma))
