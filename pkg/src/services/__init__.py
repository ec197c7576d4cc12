"""
Services: verification reports and the orchestration of verify / oracle runs
"""
