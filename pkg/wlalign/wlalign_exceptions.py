"""
    This file defines the custom wlalign exceptions.

    Exceptions deriving from WlAlignDataException are caused by the provided data (exit code 2
    in the command line), the ones deriving from WlAlignUsageException by the provided
    parameters (exit code 1). WlAlignRunException gathers the runs that completed
    without reaching their stopping criterion (exit code 3).
"""

class WlAlignDataException(Exception):
    pass

class WlAlignUsageException(Exception):
    pass

class WlAlignRunException(Exception):
    pass



#   Graph ingestion related errors
class EdgeListReadException(WlAlignDataException):
    def __init__(self, path:str, reason:str):
        super().__init__(f"Could not read the file '{path}': {reason}.")

class EdgeListFormatException(WlAlignDataException):
    def __init__(self, path:str, line_number:int, line:str):
        self.line_number = line_number
        super().__init__(f"Malformed line {line_number} in '{path}': '{line.rstrip()}', expected two non-negative integers.")

class EmptyEdgeListException(WlAlignDataException):
    def __init__(self, path:str):
        super().__init__(f"The file '{path}' does not contain any edge.")

class InvalidAnchorSetException(WlAlignDataException):
    def __init__(self, reason:str):
        super().__init__(f"Invalid anchor set: {reason}.")

class MissingAnchorsException(WlAlignDataException):
    def __init__(self):
        super().__init__("No anchor pair available, the alignment requires at least one anchor.")

class OutputDirectoryException(WlAlignDataException):
    def __init__(self, path:str, reason:str):
        super().__init__(f"Output directory '{path}' is not usable: {reason}.")

class PerturbationCapacityException(WlAlignDataException):
    def __init__(self, requested:int, capacity:int):
        super().__init__(f"Requested {requested} new edges but only {capacity} node pairs are still free.")



#   Parameter related errors
class ProbabilityRangeException(WlAlignUsageException):
    def __init__(self, p:float):
        super().__init__(f"Edge probability must be between 0 and 1, found {p}.")

class RatioRangeException(WlAlignUsageException):
    def __init__(self, name:str, ratio:float):
        super().__init__(f"'{name}' must be between 0 and 1, found {ratio}.")

class DimensionMismatchException(WlAlignUsageException):
    def __init__(self, dim_1:int, dim_2:int):
        super().__init__(f"Tuple matrices have different label dimensions: {dim_1} and {dim_2}.")

class EmptyEvaluationSetException(WlAlignUsageException):
    def __init__(self, what:str):
        super().__init__(f"The {what} is empty.")

class ConfigKeyException(WlAlignUsageException):
    def __init__(self, key:str):
        super().__init__(f"Unknown configuration key '{key}'.")

class ConfigValueException(WlAlignUsageException):
    def __init__(self, key:str, value, reason:str):
        super().__init__(f"Invalid value '{value}' for configuration key '{key}': {reason}.")

class RelabelerRegistrationException(WlAlignUsageException):
    def __init__(self, name:str, reason:str):
        super().__init__(f"Relabeler '{name}' can't be registered: {reason}.")



#   Training related errors
class ZeroNormVectorException(WlAlignDataException):
    def __init__(self, count:int):
        super().__init__(f"{count} embedding vector(s) with zero norm found while computing a cosine similarity.")

class NonFiniteGradientException(WlAlignDataException):
    def __init__(self, table:str, slots):
        self.slots = list(slots)
        shown = ", ".join(str(s) for s in self.slots[:10])
        super().__init__(f"Non finite gradient found in table '{table}' for slots [{shown}{', ...' if len(self.slots) > 10 else ''}], batch aborted.")

class UntrainedModelException(WlAlignUsageException):
    def __init__(self, what:str):
        super().__init__(f"The {what} was not computed yet.")

class NonConvergenceException(WlAlignRunException):
    def __init__(self, what:str, rounds:int):
        super().__init__(f"The {what} did not converge within {rounds} rounds.")
