"""Parse exported graph6 files with networkx and check the graphs."""

import subprocess
import sys
from pathlib import Path

import networkx as nx


def export(cli, out, h, classes, name):
    path = Path(out) / name
    subprocess.run([cli, "export", "--h", str(h), "--format", "graph6",
                    "--classes", classes, "--out", str(path)], check=True,
                   stdout=subprocess.DEVNULL)
    return nx.read_graph6(path)


def srg_parameters(g):
    degrees = {d for _, d in g.degree()}
    assert len(degrees) == 1, degrees
    lam, mu = set(), set()
    nodes = list(g.nodes())
    adj = {v: set(g[v]) for v in nodes}
    for i, x in enumerate(nodes):
        for y in nodes[i + 1:]:
            (lam if y in adj[x] else mu).add(len(adj[x] & adj[y]))
    assert len(lam) == 1 and len(mu) == 1, (lam, mu)
    return g.number_of_nodes(), degrees.pop(), lam.pop(), mu.pop()


def main():
    cli, out = sys.argv[1], sys.argv[2]
    k6 = export(cli, out, 1, "2", "nx_k6.g6")
    assert nx.is_isomorphic(k6, nx.complete_graph(6))
    g = export(cli, out, 2, "1,2", "nx_srg2.g6")
    params = srg_parameters(g)
    assert params == (120, 51, 18, 24), params
    c = export(cli, out, 2, "3", "nx_c3.g6")
    assert nx.is_isomorphic(nx.complement(c), g)
    print("graph6 checks passed:", params)


if __name__ == "__main__":
    main()
