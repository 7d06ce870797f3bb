from pydantic import BaseModel, ConfigDict, Field
from typing import Dict, List, Optional, Tuple
import networkx as nx

from chainrisk.errors import ErrorCode


class Task(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: int
    name: str = ""

    # Four-point estimate (time units)
    est_min: float = Field(alias="min")
    est_avg: float = Field(alias="avg")
    est_safe: float = Field(alias="safe")
    est_max: float = Field(alias="max")

    # Units per time step, keyed by resource id
    resource_demand: Dict[str, float] = Field(default_factory=dict, alias="demand")

    @property
    def safety(self) -> float:
        """Removed safety u = S - A"""
        return self.est_safe - self.est_avg

    def estimates_ordered(self) -> bool:
        return 0 <= self.est_min <= self.est_avg <= self.est_safe <= self.est_max


class Project(BaseModel):
    """Task network with renewable resources; immutable once built"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    tasks: Tuple[Task, ...]
    precedence: Tuple[Tuple[int, int], ...] = Field(default=(), alias="arcs")
    resources: Dict[str, float] = Field(default_factory=dict)
    deadline: Optional[float] = None

    @property
    def task_ids(self) -> List[int]:
        return [t.id for t in self.tasks]

    def task_map(self) -> Dict[int, Task]:
        return {t.id: t for t in self.tasks}

    def task(self, task_id: int) -> Task:
        for t in self.tasks:
            if t.id == task_id:
                return t
        raise KeyError(task_id)

    def predecessors(self) -> Dict[int, List[int]]:
        preds: Dict[int, List[int]] = {t.id: [] for t in self.tasks}
        for a, b in self.precedence:
            if b in preds:
                preds[b].append(a)
        return preds

    def successors(self) -> Dict[int, List[int]]:
        succs: Dict[int, List[int]] = {t.id: [] for t in self.tasks}
        for a, b in self.precedence:
            if a in succs:
                succs[a].append(b)
        return succs

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.task_ids)
        g.add_edges_from(self.precedence)
        return g

    def durations(self, field: str = "est_avg") -> Dict[int, float]:
        return {t.id: getattr(t, field) for t in self.tasks}

    def with_tasks(self, tasks: List[Task]) -> "Project":
        return self.model_copy(update={"tasks": tuple(tasks)})


class RiskEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    description: str = ""

    # FMEA scores on [1, 10]
    p: float = Field(ge=1, le=10)
    impact_cost: float = Field(ge=1, le=10)
    impact_time: float = Field(ge=1, le=10)
    impact_quality: float = Field(ge=1, le=10)
    # 10 = least detectable
    d: float = Field(ge=1, le=10)


class RiskFactorMatrix(BaseModel):
    """Percent effect of each risk on each task, keyed (task-id, risk-id)"""

    model_config = ConfigDict(frozen=True)

    risk_ids: Tuple[str, ...] = ()
    entries: Dict[Tuple[int, str], float] = Field(default_factory=dict)

    def row(self, task_id: int) -> Dict[str, float]:
        return {r: rf for (t, r), rf in self.entries.items() if t == task_id}

    @property
    def is_empty(self) -> bool:
        return not self.entries


class ValidationFinding(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: ErrorCode
    message: str
    location: Optional[str] = None
    task_id: Optional[int] = None


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    errors: Tuple[ValidationFinding, ...] = ()
    warnings: Tuple[ValidationFinding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> List[str]:
        return [f.code.value for f in self.errors]
