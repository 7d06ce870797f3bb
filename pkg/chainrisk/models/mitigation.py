from __future__ import annotations

from enum import Enum
from pydantic import BaseModel, ConfigDict, Field
from typing import Optional, Tuple, Union


class GateKind(str, Enum):
    AND = "AND"
    OR = "OR"


class BasicEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    event: str
    probability: float = Field(ge=0, le=1)


class Gate(BaseModel):
    model_config = ConfigDict(frozen=True)

    gate: GateKind
    name: str = ""
    children: Tuple[Union[Gate, BasicEvent], ...] = ()


class FaultTree(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = "top event"
    root: Union[Gate, BasicEvent]

    def basic_events(self) -> Tuple[BasicEvent, ...]:
        found = []

        def walk(node):
            if isinstance(node, BasicEvent):
                found.append(node)
            else:
                for child in node.children:
                    walk(child)

        walk(self.root)
        return tuple(found)


class Strategy(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    failure_probability: float = Field(ge=0, le=1)


class EventTree(BaseModel):
    model_config = ConfigDict(frozen=True)

    # None means "take the fault-tree top event probability"
    initiating_probability: Optional[float] = Field(default=None, ge=0, le=1)
    strategies: Tuple[Strategy, ...] = ()


class EventTreePath(BaseModel):
    model_config = ConfigDict(frozen=True)

    signature: str
    probability: float


class RootCause(BaseModel):
    model_config = ConfigDict(frozen=True)

    event: str
    contribution: float


class MitigationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    top_event: str
    top_event_probability: float
    initiating_probability: float
    ranked_root_causes: Tuple[RootCause, ...]
    strategies: Tuple[Strategy, ...] = ()
    path_table: Tuple[EventTreePath, ...]
    all_success_probability: float


Gate.model_rebuild()
FaultTree.model_rebuild()
