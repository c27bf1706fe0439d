//! Holds the `acceptance` test target. It lives in its own package so that a
//! failing criterion does not stop cargo before the other test binaries run.
