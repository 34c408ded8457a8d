use std::io::Write;
use std::path::PathBuf;

use wslice_core::experiments::ExperimentReport;
use wslice_core::Error;

use crate::args::Formats;
use crate::Failure;

pub struct Writer {
    dir: PathBuf,
    formats: Formats,
}

impl Writer {
    pub fn new(dir: PathBuf, formats: Formats) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Writer { dir, formats })
    }

    /// Writes to a temporary file in the target directory, then renames it into place.
    pub fn write(&self, name: &str, contents: &str) -> Result<(), Failure> {
        let path = self.dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(Error::Io)?;
        tmp.write_all(contents.as_bytes()).map_err(Error::Io)?;
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        println!("wrote {}", path.display());
        Ok(())
    }

    /// Writes the requested artifacts and prints the verdict line; returns whether every mandatory check passed.
    pub fn finish(&self, rep: &ExperimentReport, figure: Option<String>) -> Result<bool, Failure> {
        let stem = rep.file_stem();
        if self.formats.report {
            self.write(&format!("{stem}.json"), &rep.to_json())?;
        }
        if self.formats.table && !rep.columns.is_empty() {
            self.write(&format!("{stem}.csv"), &rep.to_csv())?;
        }
        if let (true, Some(svg)) = (self.formats.figure, figure) {
            self.write(&format!("{stem}.svg"), &svg)?;
        }
        for e in rep.checks.entries.iter().filter(|e| e.mandatory && !e.verdict.passed()) {
            println!("FAIL {} {}", e.condition, e.subject.as_deref().unwrap_or(""));
        }
        println!("{}: {}", rep.scenario, if rep.passed() { "pass" } else { "fail" });
        Ok(rep.passed())
    }
}
