use std::path::PathBuf;

use serde::Serialize;

/// Compares `value`, rendered as pretty JSON, with `tests/golden/<name>`.
/// Setting `FIBCAT_BLESS=1` rewrites the file instead.
pub fn golden<T: Serialize>(name: &str, value: &T) -> Result<(), String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    let rendered = fibcat::io::render(value);
    if std::env::var_os("FIBCAT_BLESS").is_some() {
        std::fs::write(&path, &rendered).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == rendered {
        Ok(())
    } else {
        Err(format!(
            "{} differs from the computed value:\n{rendered}",
            path.display()
        ))
    }
}
