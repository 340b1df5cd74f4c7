"""SVG rendering of square ice and lattice path diagrams."""
