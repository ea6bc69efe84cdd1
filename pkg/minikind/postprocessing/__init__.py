from minikind.postprocessing.cardinality import SequentialCounter
from minikind.postprocessing.ivc import InductionChecker, compute_ivc
from minikind.postprocessing.smoothing import SMOOTHED, SMOOTHING_TIMEOUT, smooth
