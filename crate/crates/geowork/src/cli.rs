//! CLI (under construction).
