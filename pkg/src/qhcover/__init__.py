"""Exact computation of relative dominant dimensions, split quasi-hereditary
structures, characteristic tilting modules, Ringel duals and the quality of
quasi-hereditary covers for finite-dimensional algebras over GF(p) and QQ."""

__version__ = "0.1.0"
