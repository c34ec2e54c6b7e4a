"""
Command groups for the ddbar command line
"""
