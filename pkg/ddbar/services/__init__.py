"""
Computation services
"""
