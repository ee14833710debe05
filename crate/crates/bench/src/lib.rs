//! Benchmark-only crate; the measured code lives in `sphereflock`.
