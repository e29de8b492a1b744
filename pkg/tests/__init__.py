"""
Test Suite for the Rotating Euler Spectral Lab
"""
