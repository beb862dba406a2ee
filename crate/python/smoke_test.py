"""Smoke test for the toriclc extension module."""

import json

import toriclc


def main():
    p = toriclc.ToricPresentation([[1, 1, 1], [0, 1, 2]])
    assert p.dim == 2
    assert p.facets() == [[0, 1], [2, -1]]
    assert p.flags()["normal"]
    assert p.is_member([2, 3]) and not p.is_member([1, 3])
    assert p.in_localization([-5, 0], [1, 0])
    classes = p.classes()
    assert [c[1] for c in classes] == [[0, 0], [-1, 0], [0, -1], [-1, -1]]
    h = p.local_cohomology(ideal=[[1, 1]])
    assert [i for i, _ in h] == [1] and sum(m for _, m in h[0][1]) == 3

    q = toriclc.ToricPresentation([[2, 3]])
    assert q.n_sigma([-1], 0) == 2
    assert len(q.classes()) == 2

    report = json.loads(toriclc.run("grd", "matrix: 2 3\n"))
    assert report["result"]["dim1"]["notcm"]["value"]["gaps"] == [[0, 1], [1, 0]]

    try:
        toriclc.ToricPresentation([[2, 0], [0, 1]])
    except toriclc.ToricError as e:
        assert "sublattice" in str(e)
    else:
        raise AssertionError("sublattice accepted")

    print("toriclc smoke test passed")


if __name__ == "__main__":
    main()
