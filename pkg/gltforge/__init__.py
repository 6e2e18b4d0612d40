'''
Created on 18 Oct 2026

@author: gltforge developers

Numerical toolkit for the generalised Legendre transform: spectral curves,
contour-integral functions on spaces of curves, Kahler potentials and
hyperkahler checks, plus isospectral matrix flows.
'''

__version__ = '1.0.0'
