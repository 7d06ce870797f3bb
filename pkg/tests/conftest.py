import json

import numpy as np
import pytest

from chainrisk.models.project import Project, Task


def make_task(tid, avg, safe=None, lo=None, hi=None, demand=None):
    safe = avg if safe is None else safe
    return Task(
        id=tid,
        name=f"T{tid}",
        est_min=avg if lo is None else lo,
        est_avg=avg,
        est_safe=safe,
        est_max=safe if hi is None else hi,
        resource_demand=demand or {},
    )


def make_project(tasks, arcs=(), resources=None, deadline=None):
    return Project(tasks=tuple(tasks), precedence=tuple(arcs), resources=resources or {}, deadline=deadline)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def series_project():
    return make_project([make_task(1, 3.0, 5.0), make_task(2, 4.0, 6.0)], arcs=[(1, 2)])


@pytest.fixture
def diamond_project():
    """A -> B -> D and A -> C -> D with the B branch longer; C carries safety 4"""
    return make_project(
        [
            make_task(1, 2.0, 3.0, lo=1.0, hi=4.0),
            make_task(2, 6.0, 8.0, lo=5.0, hi=10.0),
            make_task(3, 3.0, 7.0, lo=2.0, hi=8.0),
            make_task(4, 2.0, 4.0, lo=1.0, hi=5.0),
        ],
        arcs=[(1, 2), (1, 3), (2, 4), (3, 4)],
    )


@pytest.fixture
def unary_project():
    """Two independent tasks (3 and 4) competing for one unit of R"""
    return make_project(
        [make_task(1, 3.0, 5.0, demand={"R": 1.0}), make_task(2, 4.0, 6.0, demand={"R": 1.0})],
        resources={"R": 1.0},
    )


REGISTER_CSV = (
    "risk_id,description,p,ic,ti,iq,d,rf:2,rf:3\n"
    "R1,late supplier,8,6,7,5,4,0.5,\n"
    "R2,design change,3,4,4,3,6,,0.4\n"
    "R3,staff turnover,6,5,8,6,5,0.2,0.3\n"
)

TREES_JSON = {
    "fault_tree": {
        "name": "late delivery",
        "root": {
            "gate": "OR",
            "name": "top",
            "children": [
                {"event": "supplier fails", "p": 0.1},
                {
                    "gate": "AND",
                    "name": "staffing",
                    "children": [{"event": "key engineer leaves", "p": 0.3}, {"event": "no backup", "p": 0.5}],
                },
            ],
        },
    },
    "event_tree": {
        "strategies": [
            {"name": "second supplier", "failure_probability": 0.2},
            {"name": "overtime", "f": 0.3},
        ]
    },
}


@pytest.fixture
def input_files(tmp_path, diamond_project):
    """Project, register and tree documents written to disk"""
    from chainrisk.ingest import dump_project_json

    project_path = tmp_path / "project.json"
    project_path.write_text(dump_project_json(diamond_project))
    register_path = tmp_path / "risks.csv"
    register_path.write_text(REGISTER_CSV)
    trees_path = tmp_path / "trees.json"
    trees_path.write_text(json.dumps(TREES_JSON))
    return {"project": project_path, "risks": register_path, "fault_tree": trees_path}
