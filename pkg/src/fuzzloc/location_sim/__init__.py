from .network import (
    DEFAULT_DROP_THRESHOLD_DBM,
    Cell,
    CellId,
    Network,
    NetworkConfigError,
    PathLoss,
    Selection,
    build_network,
    grid_config,
    load_network,
    select_cell,
    signal_strength,
)
from .risk import NETWORK_INPUTS, NetworkWindow, assess_network_risk, final_window, window_from_rows
from .simulation import (
    CSV_COLUMNS,
    RandomWalk,
    Scenario,
    ScenarioError,
    TickMetrics,
    Trace,
    load_scenario,
    run,
    scenario_from_dict,
)
from .world import (
    Call,
    Counters,
    HlrState,
    InvariantViolation,
    Message,
    Move,
    SimulationError,
    UnknownSubscriberError,
    VlrState,
    World,
)
