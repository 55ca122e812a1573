from .gate import Gate, GateTape, TapeEvent
from .statevector import MeasurementOutcome, Statevector
from .density_matrix import DensityMatrix
from .pauli_string import PauliString
from .clifford_tableau import CliffordTableau
from .zk_element import ZkElement
from .resource_state import ResourceState
from .transcript import Transcript
from .layered_resource import GadgetGroup, LayeredResource, ProtocolResult
from .ledger import ClassicalOpCounter, GateCountLedger, ScalingFit, TaskInstance
from .teleport_run import TeleportRun
from .dme_config import DmeConfig, DmeSweepRow
from .cost_report import CostTableEntry, CostTableReport
from .run_config import RunConfig
