"""Online risk control: calibrated prediction sets for streaming data.

Wraps any online predictive model and tunes a calibration parameter so the
long-run average of a bounded loss converges to a target level, whatever
the data stream does.
"""
