#!/usr/bin/env python3
"""
Convenience script to run the latfilter command line tool.

This can be executed directly: python run.py filter-ad in.pgm out.pgm
"""

from src.latfilter.main import main

if __name__ == "__main__":
    main()
