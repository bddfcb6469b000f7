fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_language(cbindgen::Language::C)
        .with_include_guard("ARSYS_H")
        .with_cpp_compat(true)
        .generate()
        .expect("unable to generate the C header")
        .write_to_file(format!("{crate_dir}/include/arsys.h"));
    println!("cargo:rerun-if-changed=src/lib.rs");
}
