"""
Dense focal stack display toolkit package
"""
__version__ = '0.1.0'
