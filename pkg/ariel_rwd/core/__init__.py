"""
Command handlers behind the ariel-rwd command line.
"""
