"""ICLL：以階層式分群自動定義分層的不平衡二元分類"""

__version__ = "1.0.0"
