"""File formats, reports, caching, and the command line front end."""
