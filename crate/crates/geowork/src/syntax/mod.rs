//! Surface syntax (under construction).
