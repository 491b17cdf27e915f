"""
Platform helpers shared by the pipeline stages.

Atomic file writing and a thread-based parallel map.
"""
