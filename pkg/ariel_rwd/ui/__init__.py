"""
Console output helpers.
"""
