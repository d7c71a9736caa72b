"""
Test package for Polydist

This package contains test scripts for the polytope tools and the command line.
"""
