"""Finite graded modules over graded algebras: Maurer-Cartan structures,
Ext groups, King stability and Hilbert-function tools."""

__version__ = "0.1.0"
