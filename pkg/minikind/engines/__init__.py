from minikind.engines.base_engine import BaseEngine, EngineContext
from minikind.engines.bmc import BmcEngine
from minikind.engines.invgen import CandidateSet, InvariantGenerationEngine, generate_candidates
from minikind.engines.kinduction import KInductionEngine
from minikind.engines.pdr import Pdr, PdrEngine, pdr_run
