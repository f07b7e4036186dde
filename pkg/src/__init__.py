"""
Core modules for decision tree learning and property testing.

This package contains the function representations, the query oracle,
the membership-query algebra, learners, projections, testers and the
experiment runner used by dtlab.py.
"""
