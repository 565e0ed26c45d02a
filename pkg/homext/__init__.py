from .errors import HomextError, MalformedInputError, PreconditionError, UnsupportedError
from .modcat import Ring, Module, Morphism, TestClass
from .chaincx import ChainComplex, ChainMap
from .extalg import Extension, ExtGroup, ExtElement, ext_group, phi, psi, baer_sum
from .adjunct import VerificationReport
from .gorenstein import GorensteinContext
