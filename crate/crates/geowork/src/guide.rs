//! Guide doc-tests (under construction).
