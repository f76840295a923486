"""Tests for the Agent-Orchestrated Code Factory"""
