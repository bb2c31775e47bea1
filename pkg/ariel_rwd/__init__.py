"""
Ariel RWD - recovery-language compiler, redundant-watchdog runtime simulator
and GSPN dependability analysis for watchdog voting policies.
"""

__version__ = "0.1.0"
