import hypothesis.strategies as st
import pytest
from hypothesis import settings

from graphreg.graph import Edge, Graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def make(vertices, edges):
    return Graph(list(vertices), [Edge(*e) for e in edges])


NAMED = {
    "G_empty1": make("v", []),
    "G_loop1": make("v", [("e", "v", "v")]),
    "G_loop2": make("v", [("e", "v", "v"), ("f", "v", "v")]),
    "G_edge": make("uv", [("e", "u", "v")]),
    "G_par": make("vw", [("g1", "w", "v"), ("g2", "w", "v")]),
    "C_2": make("ab", [("e", "a", "b"), ("f", "b", "a")]),
    "L_3": make("abc", [("e1", "a", "b"), ("e2", "b", "c")]),
    "T_2": make(["u1", "u2", "v"], [("a", "u1", "v"), ("b", "u2", "v")]),
}


@pytest.fixture(params=sorted(NAMED))
def named_graph(request):
    return request.param, NAMED[request.param]


@pytest.fixture
def graphs():
    return NAMED


@st.composite
def small_graphs(draw, max_vertices=4, max_edges=6, acyclic=False):
    n = draw(st.integers(1, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    if acyclic and n == 1:
        return Graph(vs, [])
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    if acyclic:
        pairs = pairs.filter(lambda ij: ij[0] < ij[1])
    chosen = draw(st.lists(pairs, max_size=max_edges))
    return Graph(vs, [Edge(f"e{k}", vs[i], vs[j]) for k, (i, j) in enumerate(chosen)])


AC_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[AC_RESULTS] = {}


@pytest.fixture
def ac_record(request):
    """Record one acceptance verdict; the lines are printed after the run."""
    results = request.config.stash[AC_RESULTS]

    def record(name, ok, detail):
        line = f"{name} {'PASS' if ok else 'FAIL'}  {detail}"
        results[name] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[AC_RESULTS]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results, key=lambda k: int(k.split("-")[1])):
        terminalreporter.write_line(results[name])
