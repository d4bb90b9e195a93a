//! Run manifest: a small provenance record written next to every output
//! set. The config hash covers the normalized configuration (defaults and
//! overrides folded in), so two runs with the same manifest hash consumed
//! identical inputs. The timestamp is the only non-deterministic field.

use sha2::{Digest, Sha256};
use std::fmt::Write;
use std::time::{SystemTime, UNIX_EPOCH};

pub fn render(
    command: &str,
    config_source: &str,
    overrides: &[String],
    normalized_config: &str,
    outputs: &[&str],
) -> String {
    let digest = Sha256::digest(normalized_config.as_bytes());
    let mut hash = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hash, "{byte:02x}");
    }
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "command = {command}");
    let _ = writeln!(out, "config_source = {config_source}");
    let _ = writeln!(out, "config_sha256 = {hash}");
    let _ = writeln!(out, "overrides = [{}]", overrides.join(", "));
    let _ = writeln!(out, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "timestamp_unix_s = {timestamp}");
    let _ = writeln!(out, "outputs = [{}]", outputs.join(", "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_depends_only_on_the_normalized_config() {
        let a = render("analyze", "a.toml", &[], "x = 1\n", &["out.csv"]);
        let b = render("analyze", "b.toml", &[], "x = 1\n", &["out.csv"]);
        let hash = |m: &str| {
            m.lines()
                .find(|l| l.starts_with("config_sha256"))
                .unwrap()
                .to_string()
        };
        assert_eq!(hash(&a), hash(&b));
        let c = render("analyze", "a.toml", &[], "x = 2\n", &["out.csv"]);
        assert_ne!(hash(&a), hash(&c));
    }
}
