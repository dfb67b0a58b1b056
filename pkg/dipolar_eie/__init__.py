__version__ = "0.0.1"


__all__ = "PhysicalParams, ObservableVector, assemble_liouvillian, integrate"

from dipolar_eie.data_models.observable_vector import ObservableVector
from dipolar_eie.data_models.physical_params import PhysicalParams
from dipolar_eie.dynamics import integrate
from dipolar_eie.master_equation import assemble_liouvillian
