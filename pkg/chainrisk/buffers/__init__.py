from .sizing import (
    ChainEstimates,
    FeedingSubnetwork,
    activity_variance,
    apd_buffer,
    cut_paste_buffer,
    rsem_buffer,
    strategy_for,
)

__all__ = [
    "ChainEstimates",
    "FeedingSubnetwork",
    "activity_variance",
    "apd_buffer",
    "cut_paste_buffer",
    "rsem_buffer",
    "strategy_for",
]
