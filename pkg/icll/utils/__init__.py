from icll.utils.helpers import (
    configure_logging,
    derive_seed,
    generate_run_id,
    round_half_up,
    utc_now,
)

__all__ = ["configure_logging", "derive_seed", "generate_run_id", "round_half_up", "utc_now"]
