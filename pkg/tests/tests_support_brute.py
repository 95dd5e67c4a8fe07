"""Independent brute-force oracles shared by test modules.

These deliberately avoid the library's GF(2) and union-find code paths:
classes come from breadth-first orbit enumeration over explicit flip
moves, connectivity from breadth-first search on an explicit sheet graph.
"""


def brute_classes(arr):
    n = arr.num_nodes
    vectors = [tuple((mask >> k) & 1 for k in range(n))
               for mask in range(1 << n)]
    seen = set()
    classes = []
    for v in vectors:
        if v in seen:
            continue
        orbit = {v}
        frontier = [v]
        while frontier:
            cur = frontier.pop()
            for i in range(len(arr.components)):
                nxt = tuple(int(s ^ int(r))
                            for s, r in zip(cur, arr.incidence[i]))
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        seen |= orbit
        classes.append(min(orbit))
    return sorted(classes)


def brute_connected(arr, signs):
    sheets = [(i, s) for i in range(len(arr.components)) for s in (1, -1)]
    adj = {s: set() for s in sheets}
    for (_, (i, j)), sgn in zip(arr.nodes, signs):
        pairs = ([((i, 1), (j, 1)), ((i, -1), (j, -1))] if sgn == 0
                 else [((i, 1), (j, -1)), ((i, -1), (j, 1))])
        for a, b in pairs:
            adj[a].add(b)
            adj[b].add(a)
    start = sheets[0]
    seen = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == len(sheets)
