//! Theory generators (under construction).
