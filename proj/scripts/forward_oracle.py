#!/usr/bin/env python3
"""Scalar evaluation of the embedding and scoring networks on the 3-node path
0-1-2 with hand-set parameters. Writes a C++ golden header."""

K = 2
THETA1 = [0.5, -0.3]
THETA2 = [0.2, 0.4]
THETA3 = [[1.0, 0.5], [-0.5, 1.0]]
THETA4 = [[0.3, -0.2], [0.1, 0.6]]
THETA5 = [[0.7, 0.1], [-0.2, 0.4]]
THETA6 = [[0.5, -0.1], [0.3, 0.8]]
THETA7 = [1.0, -0.5, 0.25, 0.75]
EDGES = [(0, 1), (1, 2)]
N = 3


def relu(x):
    return x if x > 0 else 0.0


def residual(solution):
    return [(u, v) for u, v in EDGES if not solution[u] and not solution[v]]


def embed(solution, layers):
    edges = residual(solution)
    nbrs = {v: [] for v in range(N)}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    h = [[0.0] * K for _ in range(N)]
    for _ in range(layers):
        new = []
        for v in range(N):
            deg = len(nbrs[v])
            w = [relu(THETA2[k] * deg) for k in range(K)]
            agg = [sum(h[u][k] for u in nbrs[v]) for k in range(K)]
            out = []
            for j in range(K):
                x = THETA1[j] * (1.0 if solution[v] else 0.0)
                x += sum(THETA3[j][k] * w[k] for k in range(K))
                x += sum(THETA4[j][k] * agg[k] for k in range(K))
                out.append(relu(x))
            new.append(out)
        h = new
    return h, nbrs


def scores(solution, layers):
    h, nbrs = embed(solution, layers)
    cand = [0 if solution[v] or not nbrs[v] else 1 for v in range(N)]
    pooled = [sum(h[v][k] for v in range(N)) for k in range(K)]
    z1 = [relu(sum(THETA5[j][k] * pooled[k] for k in range(K))) for j in range(K)]
    out = []
    for v in range(N):
        z2 = [relu(sum(THETA6[j][k] * cand[v] * h[v][k] for k in range(K))) for j in range(K)]
        out.append(sum(THETA7[j] * z1[j] for j in range(K)) + sum(THETA7[K + j] * z2[j] for j in range(K)))
    return h, out, cand


def fmt(xs):
    return ", ".join(repr(float(x)) for x in xs)


def main():
    print("// Generated by scripts/forward_oracle.py; do not edit.")
    print("#pragma once\n\n#include <array>\n\nnamespace golden::path3 {\n")
    print(f"inline constexpr std::array<double, 2> kTheta1{{{fmt(THETA1)}}};")
    print(f"inline constexpr std::array<double, 2> kTheta2{{{fmt(THETA2)}}};")
    for name, m in (("kTheta3", THETA3), ("kTheta4", THETA4), ("kTheta5", THETA5), ("kTheta6", THETA6)):
        print(f"inline constexpr std::array<double, 4> {name}{{{fmt(m[0] + m[1])}}};  // row-major")
    print(f"inline constexpr std::array<double, 4> kTheta7{{{fmt(THETA7)}}};\n")
    cases = [("Empty", [0, 0, 0]), ("AfterNode0", [1, 0, 0])]
    for label, sol in cases:
        for layers in (1, 2):
            h, s, cand = scores(sol, layers)
            flat = [x for row in h for x in row]
            print(f"inline constexpr std::array<double, 6> kEmbed{label}L{layers}{{{fmt(flat)}}};")
            print(f"inline constexpr std::array<double, 3> kScores{label}L{layers}{{{fmt(s)}}};")
    # Bellman target for the move 0 from the empty state at L=2, gamma 0.9.
    _, nxt, cand = scores([1, 0, 0], 2)
    best = max(q for q, c in zip(nxt, cand) if c)
    print(f"\ninline constexpr double kTargetAfterNode0L2 = {-1.0 + 0.9 * best!r};")
    print("\n}  // namespace golden::path3")


if __name__ == "__main__":
    main()
