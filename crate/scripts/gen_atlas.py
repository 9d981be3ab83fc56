"""Regenerate crates/core/data/atlas_connected.g6 from the networkx copy of
the Read & Wilson graph atlas.  Only connected graphs on 1..6 vertices are
kept; each line is `<atlas id>\t<graph6>`."""
import sys

import networkx as nx


def main(out):
    with open(out, "w") as fh:
        fh.write("# atlas_id\tgraph6 (connected graphs, 1 <= n <= 6; source: networkx graph_atlas)\n")
        for i, g in enumerate(nx.graph_atlas_g()):
            n = g.number_of_nodes()
            if n == 0 or n > 6 or not nx.is_connected(g):
                continue
            g6 = nx.to_graph6_bytes(g, header=False).strip().decode()
            fh.write(f"{i}\t{g6}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/data/atlas_connected.g6")
