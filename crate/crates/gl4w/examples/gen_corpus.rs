//! Regenerates data/identities.json from the compiled-in corpus.

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/identities.json");
    std::fs::write(path, gl4w::corpus::builtin_corpus_json() + "\n").unwrap();
    println!("wrote {path}");
}
