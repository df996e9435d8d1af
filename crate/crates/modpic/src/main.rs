fn main() {
    // Wired to the CLI module once the full command set is in place.
}
