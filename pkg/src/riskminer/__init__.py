"""Text mining toolkit for financial risk detection.

Subpackages cover corpus ingestion, preprocessing, features, topic
models, classifiers, evaluation and financial-ratio screening; the
``riskminer`` command line tool chains them stage by stage.
"""

__version__ = "0.1.0"
