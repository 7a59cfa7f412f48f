use std::env;
use std::path::PathBuf;

use cbindgen::{Config, EnumConfig, Language, RenameRule};

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");

    let config = Config {
        language: Language::C,
        include_guard: Some("POISSON_FORGE_H".into()),
        cpp_compat: true,
        sys_includes: vec!["stdint.h".into()],
        no_includes: true,
        enumeration: EnumConfig { rename_variants: RenameRule::QualifiedScreamingSnakeCase, ..Default::default() },
        ..Default::default()
    };

    cbindgen::generate_with_config(&crate_dir, config)
        .expect("cbindgen")
        .write_to_file(crate_dir.join("include/poisson_forge.h"));
}
