"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-09
@Docs: 合成部分域自适应数据
"""

from app.data.batching import BatchPair, batches, num_batches
from app.data.dataset import Dataset, UnlabeledDataset
from app.data.synthetic import class_centers, domain_shift, gen_pda_task

__all__ = [
    "BatchPair",
    "Dataset",
    "UnlabeledDataset",
    "batches",
    "class_centers",
    "domain_shift",
    "gen_pda_task",
    "num_batches",
]
