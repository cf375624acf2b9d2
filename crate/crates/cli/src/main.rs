fn main() {
    eprintln!("cwb: not yet wired up");
    std::process::exit(1);
}
