fn main() {
    eprintln!("shellcp: not yet wired");
    std::process::exit(1);
}
