//! Helpers shared by the integration tests.

pub mod oracle;

use std::io::Write;

/// Write a line to stderr directly, so it shows up even when the test
/// harness captures `print!` output.
pub fn report(line: &str) {
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "{line}");
}
