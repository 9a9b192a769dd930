# fixtures/instances.py

"""
Hand-built workflows with known scores, and the fixture corpus shipped
under data/fixtures/.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from core.graph import END, START, Edge, WorkflowGraph, build_graph, graph_from_adjacency
from parsing.records import GoldRecord, Scenario

# --- small graphs ---


def minimal_workflow() -> WorkflowGraph:
    return build_graph([(1, "a")], [(START, 1), (1, END)])


def parallel_graph(n: int) -> WorkflowGraph:
    return graph_from_adjacency({index: f"step {index}" for index in range(1, n + 1)}, {})


def linear_graph(n: int) -> WorkflowGraph:
    adjacency = {index: [index + 1] for index in range(1, n)}
    return graph_from_adjacency({index: f"step {index}" for index in range(1, n + 1)}, adjacency)


def diamond_w3() -> WorkflowGraph:
    """1 -> {2, 3} -> 4."""
    return graph_from_adjacency(
        {index: f"step {index}" for index in range(1, 5)},
        {1: [2, 3], 2: [4], 3: [4]},
    )


# --- parallel tool calls: three independent requests ---

CASE_A_LABELS = [
    "Analyze access_logs.txt for potential malicious activity using machine learning.",
    "Retrieve network policy for library wscDOqa63Giq regarding internet access.",
    "Get digital PR metrics for Beauty Revolution campaign from 2022-01-01 to 2022-12-31 on Twitter, Facebook, and Instagram.",
]
CASE_A_EDGES: List[Edge] = [(START, 1), (START, 2), (START, 3), (1, END), (2, END), (3, END)]
# Lettered node lines and a spurious dependency of 2 and 3 on 1
CASE_A_PREDICTION = (
    "Node:\n"
    f"a. {CASE_A_LABELS[0]}\n"
    f"b. {CASE_A_LABELS[1]}\n"
    f"c. {CASE_A_LABELS[2]}\n"
    "Edge:\n"
    "(START, 1) (1, 2) (1, 3) (2, END) (3, END)"
)


def case_study_a_gold() -> WorkflowGraph:
    return build_graph(list(enumerate(CASE_A_LABELS, start=1)), CASE_A_EDGES)


# --- embodied: cooling a potato, prediction misses the search step ---

CASE_B_LABELS = [
    "go to where the potato is located",
    "take potato from where it is located",
    "go to fridge",
    "cool potato with fridge",
    "go to garbagecan",
    "put potato in/on garbagecan.",
]
# Unnumbered node lines, indexed by position
CASE_B_PREDICTION = (
    "Node:\n"
    "Go to fridge 1\n"
    "Take cool potato from fridge 1\n"
    "Go to garbagecan 1\n"
    "Put potato in garbagecan 1\n"
    "Edge:\n"
    "(START, 1) (1, 2) (2, 3) (3, 4) (4, END)"
)


def case_study_b_gold() -> WorkflowGraph:
    adjacency = {index: [index + 1] for index in range(1, len(CASE_B_LABELS))}
    return graph_from_adjacency(dict(enumerate(CASE_B_LABELS, start=1)), adjacency)


# --- the shipped fixture corpus ---


@dataclass(frozen=True)
class FixtureCase:
    """One corpus sample and its expected scores under the exact provider."""

    id: str
    scenario: Scenario
    task: str
    labels: Tuple[str, ...]
    edges: Tuple[Tuple, ...]
    # raw model text, or structured (labels, edges); None means no prediction
    raw_text: Optional[str] = None
    structured: Optional[Tuple[Tuple[str, ...], Tuple[Tuple, ...]]] = None
    expected_f1_chain: float = 0.0
    expected_f1_graph: float = 0.0
    durations: Optional[Tuple[float, ...]] = None
    action_list: Tuple[str, ...] = ()

    def gold_record(self) -> GoldRecord:
        return GoldRecord(
            id=self.id,
            scenario=self.scenario,
            task=self.task,
            action_list=list(self.action_list),
            nodes=list(self.labels),
            edges=list(self.edges),
        )

    def prediction_record(self) -> Optional[Dict]:
        if self.raw_text is not None:
            return {"id": self.id, "raw_text": self.raw_text}
        if self.structured is not None:
            labels, edges = self.structured
            return {"id": self.id, "nodes": list(labels), "edges": [list(edge) for edge in edges]}
        return None


def _text(labels: Sequence[str], edges: str) -> str:
    nodes = "\n".join(f"{index}: {label}" for index, label in enumerate(labels, start=1))
    return f"Node:\n{nodes}\nEdge:\n{edges}"


_FLIGHT = ("Search flights from Paris to Rome", "Book a hotel in Rome")
_COFFEE = (
    "go to kitchen",
    "take mug from cabinet 1",
    "take coffee from drawer 1",
    "make coffee with coffeemachine 1",
)
_CLOTH = ("go to sinkbasin 1", "clean cloth with sinkbasin 1")
_SUM = ("read the problem statement", "compute the sum of the numbers", "report the final answer")
_PRIMES = ("list the prime numbers below 20", "sum the listed primes", "check the sum for errors")
_DENSITY = (
    "search for the city population",
    "search for the city area",
    "compute the population density",
    "write the answer",
)
_ALFWORLD_ACTIONS = ("go to {recep}", "take {obj} from {recep}", "put {obj} in/on {recep}", "clean {obj} with {recep}")

FIXTURE_CASES: Tuple[FixtureCase, ...] = (
    FixtureCase(
        id="fc-case-a",
        scenario=Scenario.FUNCTION_CALL,
        task="Analyze the access logs, retrieve a library network policy and get campaign PR metrics.",
        labels=tuple(CASE_A_LABELS),
        edges=tuple(CASE_A_EDGES),
        raw_text=CASE_A_PREDICTION,
        expected_f1_chain=1.0,
        expected_f1_graph=2 / 3,
        durations=(2.0, 3.0, 5.0),
    ),
    FixtureCase(
        id="fc-fmt",
        scenario=Scenario.FUNCTION_CALL,
        task="Find a flight to Rome and a hotel there.",
        labels=_FLIGHT,
        edges=((START, 1), (START, 2), (1, END), (2, END)),
        raw_text="Node:\n1: Search flights from Paris to Rome\n2: Book a hotel in Rome",
    ),
    FixtureCase(
        id="ps-rev",
        scenario=Scenario.PROBLEM_SOLVING,
        task="Add up the numbers given in the problem.",
        labels=_SUM,
        edges=((START, 1), (1, 2), (2, 3), (3, END)),
        raw_text=_text(tuple(reversed(_SUM)), "(START, 1) (1, 2) (2, 3) (3, END)"),
        expected_f1_chain=1 / 3,
        expected_f1_graph=2 / 3,
        durations=(2.0, 3.0, 5.0),
    ),
    FixtureCase(
        id="ps-extra",
        scenario=Scenario.PROBLEM_SOLVING,
        task="What is the sum of the primes below 20?",
        labels=_PRIMES,
        edges=((START, 1), (1, 2), (2, 3), (3, END)),
        structured=(
            (_PRIMES[0], _PRIMES[1], "unrelated step", _PRIMES[2]),
            ((START, 1), (1, 2), (2, 3), (3, 4), (4, END)),
        ),
        expected_f1_chain=6 / 7,
        expected_f1_graph=4 / 7,
    ),
    FixtureCase(
        id="emb-w3",
        scenario=Scenario.EMBODIED,
        task="Your task is to: make some coffee.",
        labels=_COFFEE,
        edges=((START, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, END)),
        raw_text=_text((_COFFEE[0], _COFFEE[2], _COFFEE[1], _COFFEE[3]), "(START, 1) (1, 2) (2, 3) (3, 4) (4, END)"),
        expected_f1_chain=1.0,
        expected_f1_graph=0.5,
        durations=(1.0, 4.0, 2.0, 1.0),
        action_list=_ALFWORLD_ACTIONS,
    ),
    FixtureCase(
        id="emb-miss",
        scenario=Scenario.EMBODIED,
        task="Your task is to: clean a cloth.",
        labels=_CLOTH,
        edges=((START, 1), (1, 2), (2, END)),
        action_list=_ALFWORLD_ACTIONS,
    ),
    FixtureCase(
        id="og-self",
        scenario=Scenario.OPEN_GROUNDED,
        task="What is the population density of the city?",
        labels=_DENSITY,
        edges=((START, 1), (START, 2), (1, 3), (2, 3), (3, 4), (4, END)),
        raw_text=_text(_DENSITY, "(START, 1) (START, 2) (1, 3) (2, 3) (3, 4) (4, END)"),
        expected_f1_chain=1.0,
        expected_f1_graph=1.0,
    ),
)

# Order of the records in the shipped prediction file
PREDICTION_ORDER = ("og-self", "emb-w3", "ps-extra", "fc-case-a", "ps-rev", "fc-fmt")
