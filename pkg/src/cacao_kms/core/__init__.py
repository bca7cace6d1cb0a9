"""Playbook data model: parsing, validation, canonical form, signatures."""
