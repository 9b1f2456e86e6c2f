from .metrics import (EvalReport, delta_coverage, endpoint_pinball_loss, evaluate_trace, full_space_rate,
                      length_summary, mc_risk, mc_sequence, msl, report_to_dict, streak_lengths)

__all__ = ["EvalReport", "evaluate_trace", "msl", "streak_lengths", "delta_coverage", "mc_risk", "mc_sequence",
           "length_summary", "full_space_rate", "endpoint_pinball_loss", "report_to_dict"]
