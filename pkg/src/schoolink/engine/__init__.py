"""
Schoolink engine: threshold prediction, community baseline, evaluation,
configuration and the pipeline runner.
"""
