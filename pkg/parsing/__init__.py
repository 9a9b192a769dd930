# parsing/__init__.py
