"""Matroid algorithms for disjoint transversal bases, with exact and
interval-certified evaluation of the accompanying probability bounds."""

__version__ = "0.1.0"

from .errors import ContractError, InputError
from .matroid import (GraphicMatroid, Instance, LinearMatroid, Matroid, PartitionMatroid,
                      UniformMatroid, graphic_instance, random_instance, uniform_instance)
from .transversal import (RadoReport, SubsetFamily, Transversal, find_transversal_basis,
                          matroid_intersection, rado_check_bruteforce, verify_transversal)
