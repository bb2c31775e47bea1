"""
Utility functions shared by the ariel-rwd subcommands.
"""
