"""
walkerverify test suite.
"""
